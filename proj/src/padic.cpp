#include "isocrys/padic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "isocrys/errors.hpp"

namespace isocrys {

std::int64_t vp(const Integer& n, long p) {
  if (n == 0) return kExact;
  if (p == 2) return static_cast<std::int64_t>(mpz_scan1(n.get_mpz_t(), 0));
  std::int64_t v = 0;
  Integer m = n;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

namespace {

void mod_in_place(Integer& c, const Integer& mod) { mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t()); }

// Rational that is p-integral, reduced modulo mod.
Integer integral_residue(const Rational& r, long p, const Integer& mod) {
  if (r.is_zero()) return 0;
  if (valuation(r, p) < 0) throw ValidationError("expected a p-integral coordinate, got " + r.str());
  Integer inv;
  Integer d = r.den();
  if (!mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t()))
    throw ValidationError("denominator not invertible modulo p");
  Integer out = r.num() * inv;
  mod_in_place(out, mod);
  return out;
}

std::vector<long> prime_factors(Integer n) {
  std::vector<long> out;
  for (long d = 2; Integer(d) * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n.get_si());
  return out;
}

// Polynomials modulo a monic g over Z/mod, coefficient vectors of length deg g.
struct PolyRing {
  Coeffs g;  // monic, length f+1
  Integer mod;
  int f() const { return static_cast<int>(g.size()) - 1; }

  Coeffs mul(const Coeffs& a, const Coeffs& b) const {
    int n = f();
    std::vector<Integer> t(2 * n - 1);
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < n; ++j) mpz_addmul(t[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    for (int d = 2 * n - 2; d >= n; --d) {
      if (t[d] == 0) continue;
      mod_in_place(t[d], mod);
      for (int j = 0; j < n; ++j) mpz_submul(t[d - n + j].get_mpz_t(), t[d].get_mpz_t(), g[j].get_mpz_t());
      t[d] = 0;
    }
    Coeffs out(t.begin(), t.begin() + n);
    for (auto& c : out) mod_in_place(c, mod);
    return out;
  }
  Coeffs one() const {
    Coeffs o(f(), 0);
    o[0] = 1;
    if (f() == 1) mod_in_place(o[0], mod);
    return o;
  }
  Coeffs pow(Coeffs a, Integer n) const {
    Coeffs r = one();
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) r = mul(r, a);
      n >>= 1;
      if (n > 0) a = mul(a, a);
    }
    return r;
  }
  Coeffs x() const {
    Coeffs o(f(), 0);
    if (f() == 1) {
      o[0] = -g[0];
      mod_in_place(o[0], mod);
    } else {
      o[1] = 1;
    }
    return o;
  }
};

// Monic degree-f polynomial over F_p whose root generates F_q^*, first in
// the order of sum c_i p^i.
Coeffs primitive_polynomial(long p, int f) {
  Integer q = ipow(p, static_cast<unsigned long>(f));
  Integer qm1 = q - 1;
  auto primes = prime_factors(qm1);
  Integer count = q;
  for (Integer idx = 0; idx < count; ++idx) {
    Coeffs g(f + 1);
    Integer t = idx;
    for (int i = 0; i < f; ++i) {
      g[i] = t % p;
      t /= p;
    }
    g[f] = 1;
    if (g[0] == 0) continue;
    PolyRing R{g, Integer(p)};
    Coeffs xx = R.x();
    if (R.pow(xx, qm1) != R.one()) continue;
    bool ok = true;
    for (long r : primes)
      if (R.pow(xx, qm1 / r) == R.one()) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive polynomial found");
}

}  // namespace

// ---------------------------------------------------------------- LocalField

FieldPtr LocalField::unramified(long p, int f, int precision) {
  if (p < 2 || f < 1 || precision < 1) throw std::invalid_argument("bad unramified field parameters");
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("p must be prime");
  std::shared_ptr<LocalField> F(new LocalField());
  F->p_ = p;
  F->f_ = f;
  F->e_ = 1;
  F->precision_ = precision;
  F->work_ = precision + 16;
  F->build_powers();

  const Integer mod = F->ppow(F->work_);
  Coeffs g = primitive_polynomial(p, f);
  PolyRing R{g, mod};
  // Teichmüller lift of the class of X, then its minimal polynomial.
  Coeffs t = R.x();
  Integer q = F->q();
  for (int it = 0; it < F->work_ + 2; ++it) t = R.pow(t, q);
  std::vector<Coeffs> poly{R.one()};  // coefficients in R of prod (Y - t^{p^i})
  Coeffs root = t;
  for (int i = 0; i < f; ++i) {
    std::vector<Coeffs> next(poly.size() + 1, Coeffs(f, 0));
    for (size_t d = 0; d < poly.size(); ++d) {
      for (int j = 0; j < f; ++j) next[d + 1][j] += poly[d][j];
      Coeffs prod = R.mul(poly[d], root);
      for (int j = 0; j < f; ++j) next[d][j] -= prod[j];
    }
    for (auto& c : next)
      for (auto& v : c) mod_in_place(v, mod);
    poly = std::move(next);
    root = R.pow(root, Integer(p));
  }
  F->modulus_.assign(f + 1, 0);
  for (int d = 0; d <= f; ++d) {
    for (int j = 1; j < f; ++j)
      if (poly[d][j] != 0) throw std::logic_error("Teichmüller modulus is not defined over Z_p");
    F->modulus_[d] = poly[d][0];
  }
  F->generator_ = (f == 1) ? Coeffs{t[0]} : R.x();

  // sigma(x^j) = x^{pj}
  PolyRing K{F->modulus_, mod};
  Coeffs gen = F->generator_;
  Coeffs sx = K.pow(gen, Integer(p));
  Coeffs cur = K.one();
  for (int j = 0; j < f; ++j) {
    F->frob_.push_back(cur);
    cur = K.mul(cur, sx);
  }
  if (f > 1) F->qp_ = unramified(p, 1, precision);
  return F;
}

FieldPtr LocalField::eisenstein(const FieldPtr& base, const ExtensionSpec& spec) {
  if (!base || !base->is_unramified()) throw std::invalid_argument("Eisenstein extension needs an unramified base");
  const int e = static_cast<int>(spec.eisenstein.size());
  if (e < 2) throw ValidationError("Eisenstein polynomial must have degree at least 2");
  std::shared_ptr<LocalField> F(new LocalField());
  F->p_ = base->p_;
  F->f_ = base->f_;
  F->e_ = e;
  F->precision_ = base->precision_;
  F->work_ = base->work_;
  F->modulus_ = base->modulus_;
  F->generator_ = base->generator_;
  F->frob_ = base->frob_;
  F->base_ = base;
  F->qp_ = base->prime_field();
  F->spec_ = spec;
  F->build_powers();
  const int f = F->f_;
  const long p = F->p_;
  const Integer mod = F->ppow(F->work_);

  auto base_coeffs = [&](const BaseCoords& bc) {
    if (static_cast<int>(bc.size()) != f && bc.size() != 1)
      throw ValidationError("base element needs 1 or f coordinates");
    Coeffs c(f, 0);
    for (size_t j = 0; j < bc.size(); ++j) c[j] = integral_residue(bc[j], p, mod);
    return c;
  };
  for (int i = 0; i < e; ++i) {
    const auto& bc = spec.eisenstein[i];
    for (const auto& r : bc)
      if (!r.is_zero() && valuation(r, p) < 1) throw ValidationError("Eisenstein coefficient not divisible by p");
    if (i == 0) {
      long v = kExact;
      for (const auto& r : bc)
        if (!r.is_zero()) v = std::min<long>(v, valuation(r, p));
      if (v != 1) throw ValidationError("constant term of Eisenstein polynomial must have valuation 1");
    }
    F->eis_.push_back(base_coeffs(bc));
  }
  auto element_coeffs = [&](const std::vector<BaseCoords>& v) {
    if (static_cast<int>(v.size()) > e) throw ValidationError("too many coefficients for an element of L");
    Coeffs c(static_cast<size_t>(e) * f, 0);
    for (size_t i = 0; i < v.size(); ++i) {
      Coeffs b = base_coeffs(v[i]);
      for (int j = 0; j < f; ++j) c[i * f + j] = b[j];
    }
    return c;
  };
  for (const auto& a : spec.automorphisms) {
    Coeffs img = element_coeffs(a.image);
    std::vector<Coeffs> pw;
    Coeffs cur(static_cast<size_t>(e) * f, 0);
    cur[0] = 1;
    for (int i = 0; i < e; ++i) {
      pw.push_back(cur);
      cur = F->ring_mul(cur, img, mod);
    }
    // E(tau(u)) must vanish.
    Coeffs acc = cur;
    for (int i = 0; i < e; ++i) {
      Coeffs ci(static_cast<size_t>(e) * f, 0);
      for (int j = 0; j < f; ++j) ci[j] = F->eis_[i][j];
      Coeffs term = F->ring_mul(ci, pw[i], mod);
      for (size_t t = 0; t < acc.size(); ++t) acc[t] += term[t];
    }
    const Integer check = F->ppow(F->precision_);
    for (auto& v : acc) {
      mod_in_place(v, check);
      if (v != 0) throw ValidationError("automorphism '" + a.name + "' does not preserve the Eisenstein polynomial");
    }
    F->tau_powers_.push_back(std::move(pw));
  }
  for (const auto& r : spec.roots_of_unity) {
    F->roots_.emplace_back(r.order, element_coeffs(r.value));
  }
  for (const auto& [order, c] : F->roots_) {
    Padic z = Padic::from_coeffs(F, 0, c, kExact);
    if (!(z.pow(order) - F->one()).is_zero()) throw ValidationError("declared root of unity has wrong order");
    for (long r : prime_factors(Integer(order)))
      if ((z.pow(order / r) - F->one()).is_zero()) throw ValidationError("declared root of unity is not primitive");
  }
  return F;
}

void LocalField::build_powers() {
  ppow_cache_.resize(static_cast<size_t>(4 * work_ + 64));
  ppow_cache_[0] = 1;
  for (size_t i = 1; i < ppow_cache_.size(); ++i) ppow_cache_[i] = ppow_cache_[i - 1] * p_;
}

const Integer& LocalField::ppow(std::int64_t n) const {
  if (n < 0) throw std::logic_error("negative power of p");
  if (static_cast<size_t>(n) < ppow_cache_.size()) return ppow_cache_[static_cast<size_t>(n)];
  thread_local Integer scratch;
  scratch = ipow(p_, static_cast<unsigned long>(n));
  return scratch;
}

FieldPtr LocalField::base() const { return e_ == 1 ? shared_from_this() : base_; }

FieldPtr LocalField::prime_field() const { return (f_ == 1 && e_ == 1) ? shared_from_this() : qp_; }

FieldPtr LocalField::with_precision(int precision) const {
  FieldPtr K = unramified(p_, f_, precision);
  if (e_ == 1) return K;
  return eisenstein(K, spec_);
}

bool LocalField::same_tower(const LocalField& o) const {
  if (this == &o) return true;
  if (p_ != o.p_ || f_ != o.f_ || e_ != o.e_ || precision_ != o.precision_) return false;
  if (modulus_ != o.modulus_ || eis_ != o.eis_) return false;
  if (tau_powers_.size() != o.tau_powers_.size()) return false;
  for (size_t i = 0; i < tau_powers_.size(); ++i)
    if (tau_powers_[i] != o.tau_powers_[i]) return false;
  return true;
}

Padic LocalField::one() const { return Padic(shared_from_this(), Rational(1)); }

Padic LocalField::generator() const {
  Coeffs c(static_cast<size_t>(e_) * f_, 0);
  for (int j = 0; j < f_; ++j) c[j] = generator_[j];
  return Padic::from_coeffs(shared_from_this(), 0, c, static_cast<std::int64_t>(e_) * precision_);
}

Padic LocalField::uniformizer() const {
  if (e_ == 1) return Padic(shared_from_this(), Rational(p_));
  Coeffs c(static_cast<size_t>(e_) * f_, 0);
  c[f_] = 1;
  return Padic::from_coeffs(shared_from_this(), 0, c, static_cast<std::int64_t>(e_) * precision_ + 1);
}

bool LocalField::has_root_of_unity(long order) const {
  if (order < 1) return false;
  long ppart = 1, rest = order;
  while (rest % p_ == 0) {
    rest /= p_;
    ppart *= p_;
  }
  if ((q() - 1) % rest != 0) return false;
  if (ppart == 1) return true;
  if (p_ == 2 && ppart == 2) return true;
  for (const auto& [d, c] : roots_)
    if (d % ppart == 0) return true;
  return false;
}

Padic LocalField::root_of_unity(long order) const {
  if (!has_root_of_unity(order))
    throw FieldIncompatibility("no primitive root of unity of order " + std::to_string(order) + " in " + describe());
  long ppart = 1, rest = order;
  while (rest % p_ == 0) {
    rest /= p_;
    ppart *= p_;
  }
  Integer qm1 = q() - 1;
  Padic z = generator().pow(Integer(qm1 / rest).get_si());
  if (ppart == 1) return z;
  if (p_ == 2 && ppart == 2) return -z;
  for (const auto& [d, c] : roots_) {
    if (d % ppart != 0) continue;
    Padic r = Padic::from_coeffs(shared_from_this(), 0, c, kExact);
    return z * r.pow(d / ppart);
  }
  throw std::logic_error("unreachable");
}

int LocalField::automorphism_index(const std::string& name) const {
  for (size_t i = 0; i < spec_.automorphisms.size(); ++i)
    if (spec_.automorphisms[i].name == name) return static_cast<int>(i);
  throw ValidationError("unknown automorphism '" + name + "'");
}

Padic LocalField::apply_automorphism(int idx, const Padic& a) const {
  if (a.is_constant() || a.is_zero()) return a;
  const auto& pw = tau_powers_.at(static_cast<size_t>(idx));
  const std::int64_t M = ceil_div(a.abs_precision_units(), e_) - a.shift() + 1;
  const Integer& mod = ppow(std::min<std::int64_t>(M, work_));
  Coeffs acc(a.coeffs().size(), 0);
  for (int i = 0; i < e_; ++i) {
    Coeffs slot(a.coeffs().size(), 0);
    bool any = false;
    for (int j = 0; j < f_; ++j) {
      slot[j] = a.coeffs()[i * f_ + j];
      any = any || slot[j] != 0;
    }
    if (!any) continue;
    Coeffs term = ring_mul(slot, pw[i], mod);
    for (size_t t = 0; t < acc.size(); ++t) acc[t] += term[t];
  }
  return Padic::from_coeffs(shared_from_this(), a.shift(), std::move(acc), a.abs_precision_units());
}

std::string LocalField::describe() const {
  std::ostringstream os;
  if (f_ == 1)
    os << "Q_" << p_;
  else
    os << "Q_" << p_ << "^" << f_;
  if (e_ > 1) os << "[u]/(Eisenstein degree " << e_ << ")";
  os << " @" << precision_;
  return os.str();
}

void LocalField::kq_reduce(Integer* t, int len) const {
  const int n = f_;
  for (int d = len - 1; d >= n; --d) {
    if (t[d] == 0) continue;
    for (int j = 0; j < n; ++j) mpz_submul(t[d - n + j].get_mpz_t(), t[d].get_mpz_t(), modulus_[j].get_mpz_t());
    t[d] = 0;
  }
}

void LocalField::kq_mul_into(const Integer* a, const Integer* b, Integer* out, const Integer& mod) const {
  const int n = f_;
  thread_local std::vector<Integer> t;
  t.assign(static_cast<size_t>(2 * n - 1), 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) mpz_addmul(t[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  for (auto& c : t) mod_in_place(c, mod);
  kq_reduce(t.data(), 2 * n - 1);
  for (int j = 0; j < n; ++j) {
    out[j] = t[j];
    mod_in_place(out[j], mod);
  }
}

Coeffs LocalField::ring_mul(const Coeffs& a, const Coeffs& b, const Integer& mod) const {
  const int e = e_, f = f_;
  const int xl = 2 * f - 1;
  std::vector<Integer> acc(static_cast<size_t>(2 * e - 1) * xl);
  for (int i = 0; i < e; ++i)
    for (int ii = 0; ii < f; ++ii) {
      const Integer& av = a[i * f + ii];
      if (av == 0) continue;
      for (int j = 0; j < e; ++j)
        for (int jj = 0; jj < f; ++jj) {
          const Integer& bv = b[j * f + jj];
          if (bv == 0) continue;
          mpz_addmul(acc[(i + j) * xl + ii + jj].get_mpz_t(), av.get_mpz_t(), bv.get_mpz_t());
        }
    }
  std::vector<Integer> slots(static_cast<size_t>(2 * e - 1) * f);
  for (int d = 0; d < 2 * e - 1; ++d) {
    Integer* t = &acc[static_cast<size_t>(d) * xl];
    for (int j = 0; j < xl; ++j) mod_in_place(t[j], mod);
    kq_reduce(t, xl);
    for (int j = 0; j < f; ++j) {
      slots[d * f + j] = t[j];
      mod_in_place(slots[d * f + j], mod);
    }
  }
  std::vector<Integer> prod(f);
  for (int d = 2 * e - 2; d >= e; --d) {
    const Integer* s = &slots[static_cast<size_t>(d) * f];
    bool any = false;
    for (int j = 0; j < f; ++j) any = any || s[j] != 0;
    if (!any) continue;
    for (int i = 0; i < e; ++i) {
      kq_mul_into(s, eis_[i].data(), prod.data(), mod);
      for (int j = 0; j < f; ++j) slots[(d - e + i) * f + j] -= prod[j];
    }
  }
  Coeffs out(slots.begin(), slots.begin() + static_cast<long>(e) * f);
  for (auto& c : out) mod_in_place(c, mod);
  return out;
}

Coeffs LocalField::ring_unit_inverse(const Coeffs& a, std::int64_t digits) const {
  const int e = e_, f = f_;
  const Integer pm(p_);
  Coeffs a0(f);
  for (int j = 0; j < f; ++j) {
    a0[j] = a[j];
    mod_in_place(a0[j], pm);
  }
  // Inverse in F_q by a0^(q-2).
  Coeffs y0(f, 0), base = a0;
  y0[0] = 1;
  Integer n = q() - 2;
  Coeffs tmp(f);
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) {
      kq_mul_into(y0.data(), base.data(), tmp.data(), pm);
      y0 = tmp;
    }
    n >>= 1;
    if (n > 0) {
      kq_mul_into(base.data(), base.data(), tmp.data(), pm);
      base = tmp;
    }
  }
  Coeffs y(static_cast<size_t>(e) * f, 0);
  for (int j = 0; j < f; ++j) y[j] = y0[j];
  const Integer& mod = ppow(digits);
  std::int64_t have = 1;
  const std::int64_t target = static_cast<std::int64_t>(e) * digits;
  while (have < target) {
    Coeffs t = ring_mul(a, y, mod);
    for (auto& c : t) c = -c;
    t[0] += 2;
    for (auto& c : t) mod_in_place(c, mod);
    y = ring_mul(y, t, mod);
    have *= 2;
  }
  return y;
}

Coeffs LocalField::frobenius_coeffs(const Coeffs& a, const Integer& mod) const {
  const int f = f_;
  Coeffs out(a.size(), 0);
  for (int i = 0; i < e_; ++i)
    for (int j = 0; j < f; ++j) {
      const Integer& c = a[i * f + j];
      if (c == 0) continue;
      for (int t = 0; t < f; ++t) mpz_addmul(out[i * f + t].get_mpz_t(), c.get_mpz_t(), frob_[j][t].get_mpz_t());
    }
  for (auto& c : out) mod_in_place(c, mod);
  return out;
}

// ---------------------------------------------------------------- Padic

Padic::Padic(const FieldPtr& F, const Rational& r) : field_(F) {
  if (!F) throw std::invalid_argument("null field");
  if (r.is_zero()) return;
  const long p = F->p();
  const int e = F->e();
  long v = isocrys::valuation(r, p);
  Integer num = r.num(), den = r.den();
  long vn = isocrys::valuation(num, p), vd = isocrys::valuation(den, p);
  const std::int64_t digits = F->precision() + 2;
  const Integer& mod = F->ppow(digits);
  mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), F->ppow(vn).get_mpz_t());
  mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), F->ppow(vd).get_mpz_t());
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  c_.assign(static_cast<size_t>(e) * F->f(), 0);
  c_[0] = num * inv;
  mod_in_place(c_[0], mod);
  k_ = v;
  A_ = static_cast<std::int64_t>(e) * (v + F->precision());
  zero_ = false;
  normalize();
}

Padic Padic::exact_zero(const FieldPtr& F) {
  Padic z;
  z.field_ = F;
  return z;
}

Padic Padic::zero(const FieldPtr& F, std::int64_t abs_units) {
  Padic z;
  z.field_ = F;
  z.A_ = abs_units;
  return z;
}

Padic Padic::from_coeffs(const FieldPtr& F, std::int64_t shift, Coeffs c, std::int64_t abs_units) {
  if (static_cast<int>(c.size()) != F->e() * F->f()) throw std::invalid_argument("coefficient array size");
  Padic a;
  a.field_ = F;
  a.k_ = shift;
  a.c_ = std::move(c);
  a.zero_ = false;
  if (abs_units >= kExact) {
    // Data given exactly: keep the full relative cap.
    bool any = false;
    for (const auto& v : a.c_) any = any || v != 0;
    if (!any) return exact_zero(F);
    std::int64_t t = kExact;
    for (const auto& v : a.c_)
      if (v != 0) t = std::min(t, vp(v, F->p()));
    for (auto& v : a.c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), F->ppow(t).get_mpz_t());
    a.k_ += t;
    a.A_ = a.valuation_units() + static_cast<std::int64_t>(F->e()) * F->precision();
  } else {
    a.A_ = abs_units;
  }
  a.normalize();
  return a;
}

Padic Padic::from_coords(const FieldPtr& F, const std::vector<BaseCoords>& coords) {
  const int e = F->e(), f = F->f();
  const long p = F->p();
  if (static_cast<int>(coords.size()) > e) throw ValidationError("too many coordinates");
  std::int64_t k = kExact;
  for (const auto& bc : coords) {
    if (static_cast<int>(bc.size()) > f) throw ValidationError("too many base coordinates");
    for (const auto& r : bc)
      if (!r.is_zero()) k = std::min<std::int64_t>(k, isocrys::valuation(r, p));
  }
  if (k == kExact) return exact_zero(F);
  const std::int64_t digits = F->precision() + 2;
  const Integer& mod = F->ppow(digits);
  Coeffs c(static_cast<size_t>(e) * f, 0);
  for (size_t i = 0; i < coords.size(); ++i)
    for (size_t j = 0; j < coords[i].size(); ++j) {
      Rational r = coords[i][j];
      if (r.is_zero()) continue;
      if (k >= 0)
        r /= Rational(F->ppow(k));
      else
        r *= Rational(F->ppow(-k));
      c[i * f + j] = integral_residue(r, p, mod);
    }
  return from_coeffs(F, k, std::move(c), kExact);
}

Padic Padic::from_base_coordinates(const FieldPtr& F, const std::vector<Padic>& coords) {
  const int e = F->e(), f = F->f();
  FieldPtr lower = (e > 1) ? F->base() : F->prime_field();
  const int slots = (e > 1) ? e : f;
  if (static_cast<int>(coords.size()) != slots) throw std::invalid_argument("wrong number of base coordinates");
  if (e == 1 && f == 1) return coords[0].realize(F);
  std::int64_t A = kExact, k = kExact;
  std::vector<Padic> cs;
  for (int i = 0; i < slots; ++i) {
    Padic c = coords[i].realize(lower);
    std::int64_t Ai = c.abs_precision_units();
    if (Ai < kExact) A = std::min(A, e > 1 ? Ai * e + i : Ai);
    if (!c.is_zero()) k = std::min(k, c.shift());
    cs.push_back(std::move(c));
  }
  if (k == kExact) return A >= kExact ? exact_zero(F) : zero(F, A);
  Coeffs out(static_cast<size_t>(e) * f, 0);
  for (int i = 0; i < slots; ++i) {
    if (cs[i].is_zero()) continue;
    const Integer& sc = F->ppow(cs[i].shift() - k);
    if (e > 1) {
      for (int j = 0; j < f; ++j) out[i * f + j] = cs[i].coeffs()[j] * sc;
    } else {
      out[i] = cs[i].coeffs()[0] * sc;
    }
  }
  return from_coeffs(F, k, std::move(out), A);
}

void Padic::set_zero(std::int64_t abs_units) {
  zero_ = true;
  A_ = abs_units;
  k_ = 0;
  c_.clear();
}

std::int64_t Padic::valuation_units() const {
  if (is_zero()) throw std::domain_error("valuation of zero");
  if (!field_) throw std::logic_error("valuation of a constant without field");
  const int e = field_->e(), f = field_->f();
  std::int64_t w = kExact;
  for (int i = 0; i < e; ++i) {
    std::int64_t v = kExact;
    for (int j = 0; j < f; ++j) v = std::min(v, vp(c_[i * f + j], field_->p()));
    if (v < kExact) w = std::min(w, static_cast<std::int64_t>(e) * (k_ + v) + i);
  }
  return w;
}

Rational Padic::valuation() const {
  return Rational(Integer(static_cast<long>(valuation_units())), Integer(field_->e()));
}

Rational Padic::abs_precision() const {
  if (!field_ || A_ >= kExact) throw std::domain_error("exact value has no precision bound");
  return Rational(Integer(static_cast<long>(A_)), Integer(field_->e()));
}

std::int64_t Padic::relative_units() const {
  if (!field_) return kExact;
  if (zero_) return 0;
  return A_ - valuation_units();
}

void Padic::normalize() {
  if (!field_ || zero_) return;
  const LocalField& F = *field_;
  const int e = F.e(), f = F.f();
  const std::int64_t cap = static_cast<std::int64_t>(F.precision()) * e;
  for (int pass = 0; pass < 3; ++pass) {
    bool any = false;
    for (int i = 0; i < e; ++i) {
      std::int64_t Mi = ceil_div(A_ - i, e) - k_;
      for (int j = 0; j < f; ++j) {
        Integer& c = c_[i * f + j];
        if (Mi <= 0)
          c = 0;
        else
          mod_in_place(c, F.ppow(Mi));
        any = any || c != 0;
      }
    }
    if (!any) {
      set_zero(A_);
      return;
    }
    std::int64_t t = kExact;
    for (const auto& c : c_)
      if (c != 0) t = std::min(t, vp(c, F.p()));
    if (t > 0) {
      for (auto& c : c_)
        if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), F.ppow(t).get_mpz_t());
      k_ += t;
    }
    std::int64_t w = valuation_units();
    if (A_ - w > cap) {
      A_ = w + cap;
      continue;
    }
    return;
  }
}

Padic Padic::realize(const FieldPtr& F) const {
  if (!field_) return q_.is_zero() ? exact_zero(F) : Padic(F, q_);
  if (field_ == F || field_->same_tower(*F)) return *this;
  throw std::invalid_argument("element of " + field_->describe() + " used in " + F->describe());
}

Padic Padic::with_abs_precision(std::int64_t abs_units) const {
  if (!field_) throw std::logic_error("constant has no field");
  Padic r = *this;
  if (abs_units >= r.A_) return r;
  if (r.zero_) {
    r.A_ = abs_units;
    return r;
  }
  r.A_ = abs_units;
  r.normalize();
  return r;
}

Padic Padic::operator-() const {
  if (!field_) return Padic(-q_);
  Padic r = *this;
  if (r.zero_) return r;
  const Integer& mod = field_->ppow(ceil_div(A_, field_->e()) - k_);
  for (auto& c : r.c_) {
    c = -c;
    mod_in_place(c, mod);
  }
  r.normalize();
  return r;
}

Padic Padic::add(const Padic& a0, const Padic& b0) {
  if (!a0.field_ && !b0.field_) return Padic(a0.q_ + b0.q_);
  const Padic a = a0.field_ ? a0 : a0.realize(b0.field_);
  const Padic b = b0.realize(a.field_);
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const std::int64_t A = std::min(a.A_, b.A_);
  if (a.zero_ && b.zero_) return zero(a.field_, A);
  if (a.zero_ || b.zero_) {
    Padic r = a.zero_ ? b : a;
    r.A_ = std::min(r.A_, A);
    r.normalize();
    return r;
  }
  const LocalField& F = *a.field_;
  const std::int64_t k = std::min(a.k_, b.k_);
  const std::int64_t M = ceil_div(A, F.e()) - k;
  if (M <= 0) return zero(a.field_, A);
  Padic r;
  r.field_ = a.field_;
  r.k_ = k;
  r.A_ = A;
  r.zero_ = false;
  r.c_.assign(a.c_.size(), 0);
  const Integer& mod = F.ppow(M);
  auto accumulate = [&](const Padic& x) {
    std::int64_t s = x.k_ - k;
    if (s >= M) return;
    const Integer& sc = F.ppow(s);
    for (size_t i = 0; i < r.c_.size(); ++i)
      if (x.c_[i] != 0) mpz_addmul(r.c_[i].get_mpz_t(), x.c_[i].get_mpz_t(), sc.get_mpz_t());
  };
  accumulate(a);
  accumulate(b);
  for (auto& c : r.c_) mod_in_place(c, mod);
  r.normalize();
  return r;
}

Padic& Padic::operator+=(const Padic& o) { return *this = add(*this, o); }
Padic& Padic::operator-=(const Padic& o) { return *this = add(*this, -o); }
Padic& Padic::operator*=(const Padic& o) { return *this = *this * o; }
Padic& Padic::operator/=(const Padic& o) { return *this = *this * o.inverse(); }

Padic operator*(const Padic& a0, const Padic& b0) {
  if (!a0.field_ && !b0.field_) return Padic(a0.q_ * b0.q_);
  if (!a0.field_) {
    if (a0.q_.is_zero()) return Padic::exact_zero(b0.field_);
    if (a0.q_ == Rational(1)) return b0;
    return a0.realize(b0.field_) * b0;
  }
  if (!b0.field_) {
    if (b0.q_.is_zero()) return Padic::exact_zero(a0.field_);
    if (b0.q_ == Rational(1)) return a0;
    return a0 * b0.realize(a0.field_);
  }
  if (a0.field_ != b0.field_ && !a0.field_->same_tower(*b0.field_))
    throw std::invalid_argument("mixed fields in product");
  const Padic& a = a0;
  const Padic& b = b0;
  if (a.is_exact_zero() || b.is_exact_zero()) return Padic::exact_zero(a.field_);
  if (a.zero_ && b.zero_) return Padic::zero(a.field_, a.A_ + b.A_);
  if (a.zero_) return Padic::zero(a.field_, a.A_ + b.valuation_units());
  if (b.zero_) return Padic::zero(a.field_, b.A_ + a.valuation_units());
  const LocalField& F = *a.field_;
  const std::int64_t wa = a.valuation_units(), wb = b.valuation_units();
  std::int64_t A = std::min(a.A_ + wb, b.A_ + wa);
  const std::int64_t k = a.k_ + b.k_;
  std::int64_t M = ceil_div(A, F.e()) - k;
  if (M > F.work_digits()) {
    M = F.work_digits();
    A = std::min(A, static_cast<std::int64_t>(F.e()) * (k + M));
  }
  Padic r;
  r.field_ = a.field_;
  r.k_ = k;
  r.A_ = A;
  r.zero_ = false;
  r.c_ = F.ring_mul(a.c_, b.c_, F.ppow(M));
  r.normalize();
  return r;
}

Padic Padic::inverse() const {
  if (!field_) {
    if (q_.is_zero()) throw std::domain_error("division by zero");
    return Padic(Rational(1) / q_);
  }
  if (is_exact_zero()) throw std::domain_error("division by exact zero");
  if (zero_) throw PrecisionFailure("inverse of an element indistinguishable from zero");
  const LocalField& F = *field_;
  const int e = F.e(), f = F.f();
  const std::int64_t w = valuation_units();
  const std::int64_t s = w - static_cast<std::int64_t>(e) * k_;
  const std::int64_t rel = A_ - w;
  const std::int64_t digits = std::min<std::int64_t>(ceil_div(rel, e) + 2, F.work_digits());
  Padic r;
  r.field_ = field_;
  r.zero_ = false;
  r.A_ = -w + rel;
  if (s == 0) {
    r.c_ = F.ring_unit_inverse(c_, digits);
    r.k_ = -k_;
  } else {
    Coeffs ue(static_cast<size_t>(e) * f, 0);
    ue[static_cast<size_t>(e - s) * f] = 1;
    Coeffs t = F.ring_mul(c_, ue, F.ppow(digits + 1));
    for (auto& c : t) mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(F.p()));
    Coeffs y = F.ring_unit_inverse(t, digits);
    r.c_ = F.ring_mul(ue, y, F.ppow(digits));
    r.k_ = -k_ - 1;
  }
  r.normalize();
  return r;
}

Padic Padic::frobenius() const {
  if (!field_ || zero_) return *this;
  if (field_->e() != 1) throw std::logic_error("Frobenius is defined here on unramified levels only");
  Padic r = *this;
  r.c_ = field_->frobenius_coeffs(c_, field_->ppow(A_ - k_));
  r.normalize();
  return r;
}

Padic Padic::frobenius_inverse() const {
  Padic r = *this;
  if (!field_) return r;
  for (int i = 1; i < field_->f(); ++i) r = r.frobenius();
  return r;
}

Padic Padic::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  Padic result = field_ ? field_->one() : Padic(1);
  Padic b = *this;
  while (n > 0) {
    if (n & 1) result = result * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return result;
}

std::vector<Padic> Padic::base_coordinates() const {
  if (!field_) throw std::logic_error("constant has no coordinates");
  const int e = field_->e(), f = field_->f();
  std::vector<Padic> out;
  if (e > 1) {
    FieldPtr K = field_->base();
    for (int i = 0; i < e; ++i) {
      std::int64_t Ai = (A_ >= kExact) ? kExact : ceil_div(A_ - i, e);
      if (zero_) {
        out.push_back(Ai >= kExact ? exact_zero(K) : zero(K, Ai));
        continue;
      }
      Coeffs c(c_.begin() + static_cast<long>(i) * f, c_.begin() + static_cast<long>(i + 1) * f);
      out.push_back(from_coeffs(K, k_, std::move(c), Ai));
    }
    return out;
  }
  FieldPtr Q = field_->prime_field();
  for (int j = 0; j < f; ++j) {
    if (zero_) {
      out.push_back(A_ >= kExact ? exact_zero(Q) : zero(Q, A_));
      continue;
    }
    out.push_back(from_coeffs(Q, k_, Coeffs{c_[j]}, A_));
  }
  return out;
}

std::string Padic::str() const {
  if (!field_) return q_.str();
  std::ostringstream os;
  if (zero_) {
    if (A_ >= kExact)
      os << "0";
    else
      os << "O(pi^" << A_ << ")";
    return os.str();
  }
  os << field_->p() << "^" << k_ << "*[";
  for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].get_str();
  os << "]+O(pi^" << A_ << ")";
  return os.str();
}

std::string Padic::key(std::int64_t abs_units) const {
  if (!field_) throw std::logic_error("constant has no key");
  if (A_ < abs_units) throw PrecisionFailure("element known only to pi^" + std::to_string(A_));
  Padic t = with_abs_precision(abs_units);
  if (t.zero_) return "0";
  std::string s = std::to_string(t.k_) + ":";
  for (const auto& c : t.c_) s += c.get_str(36) + ",";
  return s;
}

Padic embed(const Padic& a, const FieldPtr& L) {
  if (a.is_constant()) return a.realize(L);
  const FieldPtr& K = a.field();
  if (K == L || K->same_tower(*L)) return a;
  if (L->e() > 1) {
    FieldPtr B = L->base();
    Padic ak = embed(a, B);
    std::vector<Padic> coords(static_cast<size_t>(L->e()), Padic::exact_zero(B));
    coords[0] = ak;
    return Padic::from_base_coordinates(L, coords);
  }
  if (K->f() == 1 && L->f() > 1 && K->p() == L->p()) {
    FieldPtr Q = L->prime_field();
    std::vector<Padic> coords(static_cast<size_t>(L->f()), Padic::exact_zero(Q));
    coords[0] = a.realize(Q);
    return Padic::from_base_coordinates(L, coords);
  }
  throw std::invalid_argument("cannot embed " + K->describe() + " into " + L->describe());
}

bool in_subfield(const Padic& a, const FieldPtr& K) {
  if (a.is_constant() || a.is_zero()) return true;
  const FieldPtr& L = a.field();
  if (L == K || L->same_tower(*K)) return true;
  auto coords = a.base_coordinates();
  for (size_t i = 1; i < coords.size(); ++i)
    if (!coords[i].is_zero()) return false;
  if (L->e() > 1) return in_subfield(coords[0], K);
  return true;
}

Padic restrict_to(const Padic& a, const FieldPtr& K) {
  if (a.is_constant()) return a.realize(K);
  const FieldPtr& L = a.field();
  if (L == K || L->same_tower(*K)) return a;
  if (!in_subfield(a, K)) throw std::domain_error("element does not lie in " + K->describe());
  auto coords = a.base_coordinates();
  if (L->e() > 1) return restrict_to(coords[0], K);
  return coords[0];
}

Padic sqrt_unit(const Padic& a) {
  const FieldPtr& F = a.field();
  if (!F || F->e() != 1 || F->f() != 1) throw std::invalid_argument("sqrt_unit works in Q_p");
  if (a.is_zero() || a.valuation_units() != 0) throw std::domain_error("sqrt_unit expects a unit");
  const long p = F->p();
  const std::int64_t N = a.abs_precision_units();
  const Integer target = a.coeffs()[0];
  Integer x;
  if (p == 2) {
    if (target % 8 != 1) throw std::domain_error("not a square in Q_2");
    x = 1;
    for (std::int64_t k = 3; k < N + 1; ++k) {
      Integer m = F->ppow(k + 1);
      Integer d = x * x - target;
      mod_in_place(d, m);
      if (d != 0) x += F->ppow(k - 1);
    }
  } else {
    Integer pm(p);
    Integer t = target % pm;
    x = -1;
    for (long r = 1; r < p; ++r)
      if ((Integer(r) * r - t) % pm == 0) {
        x = r;
        break;
      }
    if (x < 0) throw std::domain_error("not a square in Q_p");
    Integer mod = F->ppow(N + 1);
    for (std::int64_t k = 1; k < 2 * N + 2; k *= 2) {
      Integer inv;
      Integer twox = 2 * x;
      mpz_invert(inv.get_mpz_t(), twox.get_mpz_t(), mod.get_mpz_t());
      x = x - (x * x - target) * inv;
      mod_in_place(x, mod);
    }
  }
  return Padic::from_coeffs(F, 0, Coeffs{x}, p == 2 ? N - 1 : N);
}

}  // namespace isocrys

namespace isocrys {

FieldPtr cyclotomic_extension(const FieldPtr& K, long order) {
  if (!K || !K->is_unramified()) throw FieldIncompatibility("cyclotomic extension needs an unramified base");
  const long p = K->p();
  long pa = 1, prev = 1;
  while (pa < order) {
    prev = pa;
    pa *= p;
  }
  if (pa != order || order < p) throw ValidationError("cyclotomic extension needs a p-power order");
  const long e = order - prev;
  // Phi(X) = sum_{j<p} X^{j prev}, expanded at X = u + 1.
  std::vector<Integer> phi(e + 1, 0);
  for (long j = 0; j < p; ++j) {
    const long d = j * prev;
    Integer binom = 1;
    for (long i = 0; i <= d; ++i) {
      phi[i] += binom;
      binom = binom * (d - i) / (i + 1);
    }
  }
  // Reduces an integer polynomial in u modulo the monic phi.
  auto reduce = [&](std::vector<Integer> a) {
    for (long i = static_cast<long>(a.size()) - 1; i >= e; --i) {
      Integer c = a[i];
      if (c == 0) continue;
      for (long j = 0; j <= e; ++j) a[i - e + j] -= c * phi[j];
    }
    a.resize(e, 0);
    return a;
  };
  auto coords = [&](const std::vector<Integer>& a) {
    std::vector<BaseCoords> out;
    for (const auto& c : a) out.push_back({Rational(c)});
    return out;
  };
  ExtensionSpec spec;
  spec.eisenstein = coords(std::vector<Integer>(phi.begin(), phi.end() - 1));
  spec.roots_of_unity.push_back({order, coords(reduce({1, 1}))});
  for (long k = 2; k < order; ++k) {
    if (k % p == 0) continue;
    // (u + 1)^k - 1
    std::vector<Integer> pw{1};
    for (long i = 0; i < k; ++i) {
      std::vector<Integer> nx(pw.size() + 1, 0);
      for (size_t t = 0; t < pw.size(); ++t) {
        nx[t] += pw[t];
        nx[t + 1] += pw[t];
      }
      pw = reduce(nx);
    }
    pw[0] -= 1;
    spec.automorphisms.push_back({"k" + std::to_string(k), coords(pw)});
  }
  return LocalField::eisenstein(K, spec);
}

}  // namespace isocrys
