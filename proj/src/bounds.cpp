#include "isocrys/bounds.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "isocrys/errors.hpp"

namespace isocrys {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long minkowski_exponent(long n, long p) {
  if (n < 0) throw ValidationError("minkowski_exponent: n must be non-negative");
  if (!is_prime(p)) throw ValidationError("minkowski_exponent: " + std::to_string(p) + " is not prime");
  long r = 0;
  for (long d = p - 1; d <= n; d *= p) r += n / d;
  return r;
}

MinkowskiTable minkowski_table(long n) {
  if (n < 0) throw ValidationError("minkowski_table: n must be non-negative");
  MinkowskiTable t;
  t.n = n;
  t.M = 1;
  for (long p = 2; p <= n + 1; ++p) {
    if (!is_prime(p)) continue;
    long r = minkowski_exponent(n, p);
    if (r == 0) continue;
    t.exponents.emplace_back(p, r);
    t.M *= ipow(p, static_cast<unsigned long>(r));
  }
  return t;
}

std::string MinkowskiTable::factorization() const {
  if (exponents.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i) os << " * ";
    os << exponents[i].first;
    if (exponents[i].second > 1) os << "^" << exponents[i].second;
  }
  return os.str();
}

Integer minkowski_bound(long n) { return minkowski_table(n).M; }

Integer semistability_degree(long g) {
  if (g < 1) throw ValidationError("semistability_degree: g must be positive");
  return minkowski_bound(2 * g);
}

namespace {

DivisibilityCertificate divides(std::string statement, const Integer& d, const Integer& n) {
  DivisibilityCertificate c;
  c.statement = std::move(statement);
  c.divisor = d;
  c.dividend = n;
  c.holds = d != 0 && n % d == 0;
  c.quotient = c.holds ? Integer(n / d) : Integer(0);
  return c;
}

std::string M(long n) { return "M(" + std::to_string(n) + ")"; }

}  // namespace

std::vector<DivisibilityCertificate> divisibility_checks(long a, long b, long g, long n) {
  if (a < 0 || b < 0 || n < 0 || n > g) throw ValidationError("divisibility_checks: need a, b >= 0 and 0 <= n <= g");
  std::vector<DivisibilityCertificate> out;
  out.push_back(divides(M(a) + "*" + M(b) + " | " + M(a + b), minkowski_bound(a) * minkowski_bound(b),
                        minkowski_bound(a + b)));
  Integer mn = minkowski_bound(n);
  out.push_back(divides(M(n) + "^2*" + M(2 * g - 2 * n) + " | " + M(2 * g), mn * mn * minkowski_bound(2 * g - 2 * n),
                        minkowski_bound(2 * g)));
  return out;
}

Integer wreath_sylow_order(long g) {
  if (g < 1) throw ValidationError("wreath_sylow_order: g must be positive");
  return ipow(2, static_cast<unsigned long>(minkowski_exponent(2 * g, 2)));
}

WreathOrderCheck wreath_order_check(long g) {
  if (g < 1 || g > 3) throw ValidationError("wreath_order_check: explicit construction is limited to g <= 3");
  WreathProduct W = wreath_with_symmetric(quaternion_group(), static_cast<int>(g));
  WreathOrderCheck c;
  c.g = g;
  c.order = W.group.order();
  c.two_part = ipow(2, static_cast<unsigned long>(valuation(c.order, 2)));
  c.predicted = wreath_sylow_order(g);
  c.agrees = c.two_part == c.predicted;
  return c;
}

DegreeBounds lcm_degree_formulas(const std::vector<LocalPlace>& places) {
  DegreeBounds d{1, 1};
  for (const auto& v : places) {
    if (v.toric_rank < 0 || v.component_order < 1) throw ValidationError("lcm_degree_formulas: need t_v >= 0, card >= 1");
    mpz_lcm(d.d_upper.get_mpz_t(), d.d_upper.get_mpz_t(), v.component_order.get_mpz_t());
    Integer t = minkowski_bound(v.toric_rank) * v.component_order;
    mpz_lcm(d.d_dep_upper.get_mpz_t(), d.d_dep_upper.get_mpz_t(), t.get_mpz_t());
  }
  return d;
}

CyclicCensus cyclic_subgroup_census(const FiniteGroup& G, const FiniteGroup* V, const std::vector<std::vector<int>>* action) {
  const long p = G.prime_power_base();
  if (p <= 1) throw ValidationError("cyclic_subgroup_census: group order is not a prime power > 1");
  CyclicCensus c;
  c.p = p;
  std::set<std::vector<int>> subs;
  for (int x = 0; x < G.order(); ++x) {
    if (G.pow(x, p) == 0) ++c.solutions;
    if (G.element_order(x) != p) continue;
    std::vector<int> h;
    for (long k = 0; k < p; ++k) h.push_back(G.pow(x, k));
    std::sort(h.begin(), h.end());
    subs.insert(h);
  }
  c.subgroups.assign(subs.begin(), subs.end());
  c.count = static_cast<long>(c.subgroups.size());
  c.identity_holds = c.solutions == (p - 1) * c.count + 1;
  c.count_prime_to_p = c.count % p != 0;
  if (!c.count_prime_to_p) throw InternalContradiction("number of order-p subgroups is divisible by p");
  if (V && action) {
    if (V->prime_power_base() != p && V->order() != 1)
      throw ValidationError("cyclic_subgroup_census: acting group is not a p-group for the same prime");
    if (static_cast<int>(action->size()) != V->order()) throw ValidationError("action table has wrong size");
    for (int v = 0; v < V->order(); ++v) {
      const auto& a = (*action)[v];
      if (static_cast<int>(a.size()) != G.order()) throw ValidationError("action row has wrong size");
      for (int x = 0; x < G.order(); ++x)
        for (int y = 0; y < G.order(); ++y)
          if (a[G.mul(x, y)] != G.mul(a[x], a[y])) throw ValidationError("action is not by automorphisms");
      for (int w = 0; w < V->order(); ++w)
        for (int x = 0; x < G.order(); ++x)
          if ((*action)[V->mul(v, w)][x] != a[(*action)[w][x]]) throw ValidationError("action is not a homomorphism");
    }
    for (std::size_t i = 0; i < c.subgroups.size() && !c.fixed_subgroup; ++i) {
      bool fixed = true;
      for (int v = 0; v < V->order() && fixed; ++v) {
        std::vector<int> img;
        for (int x : c.subgroups[i]) img.push_back((*action)[v][x]);
        std::sort(img.begin(), img.end());
        fixed = img == c.subgroups[i];
      }
      if (fixed) c.fixed_subgroup = static_cast<int>(i);
    }
    if (!c.fixed_subgroup) throw InternalContradiction("no order-p subgroup is fixed by the p-group action");
  }
  return c;
}

}  // namespace isocrys
