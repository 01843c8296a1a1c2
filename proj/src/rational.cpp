#include "isocrys/rational.hpp"

#include <ostream>
#include <stdexcept>

#include "isocrys/errors.hpp"

namespace isocrys {

Rational::Rational(const Integer& n, const Integer& d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::parse(std::string_view s) {
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  if (b == std::string_view::npos) throw ParseError("empty rational");
  std::string t(s.substr(b, e - b + 1));
  auto slash = t.find('/');
  auto valid_int = [](const std::string& x) {
    size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
    if (i == x.size()) return false;
    for (; i < x.size(); ++i)
      if (x[i] < '0' || x[i] > '9') return false;
    return true;
  };
  auto to_int = [](std::string x) {
    if (x[0] == '+') x.erase(0, 1);
    return Integer(x, 10);
  };
  if (slash == std::string::npos) {
    if (!valid_int(t)) throw ParseError("malformed rational '" + t + "'");
    return Rational(to_int(t));
  }
  std::string n = t.substr(0, slash), d = t.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d)) throw ParseError("malformed rational '" + t + "'");
  Integer dd = to_int(d);
  if (dd == 0) throw ParseError("zero denominator in '" + t + "'");
  return Rational(to_int(n), dd);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

long valuation(const Integer& n, long p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  Integer m = abs(n);
  long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

long valuation(const Rational& r, long p) {
  if (r.is_zero()) throw std::domain_error("valuation of zero");
  return valuation(r.num(), p) - valuation(r.den(), p);
}

Integer ipow(long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Rational floor(const Rational& r) { return Rational(floor_div(r.num(), r.den())); }

long gcd(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long lcm(long a, long b) { return (a == 0 || b == 0) ? 0 : a / gcd(a, b) * b; }

}  // namespace isocrys
