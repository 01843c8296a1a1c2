#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isocrys/errors.hpp"
#include "isocrys/group.hpp"
#include "isocrys/rational.hpp"

namespace isocrys {

bool is_prime(long p);

// r(n, p) = sum_{i >= 0} floor(n / (p^i (p - 1))).
long minkowski_exponent(long n, long p);
// M(n) = prod_p p^{r(n,p)}; M(0) = 1.
Integer minkowski_bound(long n);

struct MinkowskiTable {
  long n = 0;
  std::vector<std::pair<long, long>> exponents;  // (p, r(n,p)) for r > 0
  Integer M;
  std::string factorization() const;
};
MinkowskiTable minkowski_table(long n);

// d_g = M(2g).
Integer semistability_degree(long g);

struct DivisibilityCertificate {
  std::string statement;
  Integer divisor;
  Integer dividend;
  Integer quotient;
  bool holds = false;
};
// M(a) M(b) | M(a+b) and M(n)^2 M(2g-2n) | M(2g).
std::vector<DivisibilityCertificate> divisibility_checks(long a, long b, long g, long n);

// 2^{r(2g,2)}.
Integer wreath_sylow_order(long g);

struct WreathOrderCheck {
  long g = 0;
  Integer order;        // of the explicit Q8 wr S_g
  Integer two_part;
  Integer predicted;    // 2^{r(2g,2)}
  bool agrees = false;
};
WreathOrderCheck wreath_order_check(long g);

struct LocalPlace {
  long toric_rank = 0;   // t_v
  Integer component_order;  // Card Phi_v
};
struct DegreeBounds {
  Integer d_upper;      // lcm Card Phi_v
  Integer d_dep_upper;  // lcm M(t_v) Card Phi_v
};
DegreeBounds lcm_degree_formulas(const std::vector<LocalPlace>& places);

struct CyclicCensus {
  long p = 0;
  std::vector<std::vector<int>> subgroups;  // order-p cyclic subgroups, sorted elements
  long count = 0;
  long solutions = 0;  // #{x : x^p = e}
  bool identity_holds = false;  // solutions == (p-1) count + 1
  bool count_prime_to_p = false;
  std::optional<int> fixed_subgroup;  // index of a subgroup fixed by the action
};
// `action[v]` is the automorphism of G induced by element v of V.
CyclicCensus cyclic_subgroup_census(const FiniteGroup& G, const FiniteGroup* V = nullptr,
                                    const std::vector<std::vector<int>>* action = nullptr);

}  // namespace isocrys
