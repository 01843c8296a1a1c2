#pragma once

#include <cstdint>
#include <vector>

#include "isocrys/linalg.hpp"
#include "isocrys/matrix.hpp"

namespace isocrys {

class SymplecticSpace {
 public:
  SymplecticSpace() = default;
  // J must be alternating and invertible.
  explicit SymplecticSpace(PMat J, int guard = kDefaultGuard);
  // The standard form with J(2i, 2i+1) = 1 on K^{2g}.
  static SymplecticSpace standard(const FieldPtr& K, int g);

  const FieldPtr& field() const { return K_; }
  int dim() const { return static_cast<int>(J_.rows()); }
  int genus() const { return dim() / 2; }
  const PMat& gram() const { return J_; }

  Padic pair(const PMat& x, const PMat& y) const { return (x.transpose() * J_ * y)(0, 0); }
  // Columns of W^perp.
  PMat orthogonal(const PMat& W, int guard = kDefaultGuard) const;
  SymplecticSpace base_change(const FieldPtr& L) const;

 private:
  PMat J_;
  FieldPtr K_;
};

bool is_isotropic(const SymplecticSpace& V, const PMat& B);
bool is_lagrangian(const SymplecticSpace& V, const PMat& B, int guard = kDefaultGuard);
bool is_symplectic_map(const SymplecticSpace& V, const PMat& h);

// Columns x_1, y_1, x_2, y_2, ... with pair(x_i, y_i) = 1 and all other pairs 0,
// spanning the (non-degenerate) span of W.
PMat symplectic_basis(const SymplecticSpace& V, const PMat& W, int guard = kDefaultGuard);

// A Lagrangian meeting span(M) only in 0; retries per recursion level are
// reported through `retries` when given.
PMat lagrangian_avoiding(const SymplecticSpace& V, const PMat& M, std::uint64_t seed = 0,
                         std::vector<int>* retries = nullptr, int guard = kDefaultGuard);

struct SymplecticEigenbasis {
  FieldPtr field;
  long order = 1;        // eigenvalues are zeta^k for a fixed zeta of this order
  PMat basis;            // x_1, y_1, ..., x_g, y_g
  std::vector<long> ex;  // h x_i = zeta^{ex[i]} x_i
  std::vector<long> ey;  // h y_i = zeta^{ey[i]} y_i
};
// Over the smallest field reachable from V's field (or L when given) holding
// the eigenvalues of h, which must have finite order dividing m.
SymplecticEigenbasis symplectic_eigenbasis(const SymplecticSpace& V, const PMat& h, long m,
                                           const FieldPtr& L = nullptr, int guard = kDefaultGuard);

struct SmallIntersectionLagrangian {
  SymplecticEigenbasis eigen;
  PMat basis;  // over eigen.field
  int intersection_dim = 0;
};
// A Lagrangian F with dim(F cap h(F)) <= 1 for a perturbateur h in Sp(V).
SmallIntersectionLagrangian lagrangian_h_small_intersection(const SymplecticSpace& V, const PMat& h, long m,
                                                            const FieldPtr& L = nullptr,
                                                            int guard = kDefaultGuard);

// A Lagrangian with coordinates in K (default: V's field) drawn from a random
// affine chart of the Lagrangian Grassmannian. J must be defined over K.
PMat random_rational_lagrangian(const SymplecticSpace& V, std::uint64_t seed, const FieldPtr& K = nullptr);

}  // namespace isocrys
