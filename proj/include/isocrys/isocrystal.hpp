#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "isocrys/linalg.hpp"
#include "isocrys/matrix.hpp"

namespace isocrys {

// phi(x) = A sigma(x) in coordinates.
class PhiModule {
 public:
  PhiModule() = default;
  explicit PhiModule(PMat A, int guard = kDefaultGuard);
  PhiModule(const FieldPtr& K, const QMat& A, int guard = kDefaultGuard);

  const FieldPtr& field() const { return K_; }
  int dim() const { return static_cast<int>(A_.rows()); }
  const PMat& matrix() const { return A_; }

  // Matrix of the linear map phi^f.
  PMat linearization() const;
  PMat apply(const PMat& X) const { return A_ * frobenius(X); }

  // A -> P^{-1} A sigma(P)
  PhiModule change_basis(const PMat& P) const;
  bool is_stable(const PMat& W, int guard = kDefaultGuard) const;
  // Frobenius restricted to the span of the columns of W (must be stable).
  PhiModule restrict(const PMat& W, int guard = kDefaultGuard) const;

 private:
  FieldPtr K_;
  PMat A_;
};

PhiModule direct_sum(const std::vector<PhiModule>& parts);
// Extension of scalars to the unramified level of degree f' (a multiple of f).
PhiModule base_change(const PhiModule& D, int f_new);
// The companion matrix of x^r - p^s.
PhiModule simple_isocrystal(const FieldPtr& K, long s, long r);
// Frobenius p^twist (A^{-1})^T on the dual basis.
PhiModule dual(const PhiModule& D, int twist);

Rational t_N(const PhiModule& D);

struct SlopeProfile {
  std::vector<std::pair<Rational, int>> slopes;  // ascending, with multiplicities
  std::vector<std::pair<int, Rational>> vertices;  // Newton polygon of det(X - phi^f), valuations / f
  int dim() const;
  Rational total() const;
  std::vector<Rational> multiset() const;
  bool operator==(const SlopeProfile& o) const { return slopes == o.slopes; }
};

// Lower convex hull slopes of the points (i, v_i); entries without a value are
// known only to be >= the given bound.  Roots have valuation -slope.
struct NewtonPoint {
  int i;
  Rational v;
  bool exact;
};
SlopeProfile newton_polygon(const std::vector<NewtonPoint>& pts, int scale = 1);

SlopeProfile newton_slopes(const PhiModule& D);

struct IsoclinicPart {
  Rational slope;
  PMat basis;
};
std::vector<IsoclinicPart> isoclinic_decompose(const PhiModule& D, int guard = kDefaultGuard);

// Q_p-basis of {U : U A_from = A_to sigma(U)}.
std::vector<PMat> hom_basis(const PhiModule& from, const PhiModule& to, int guard = kDefaultGuard);
std::vector<PMat> endomorphism_basis(const PhiModule& D, int guard = kDefaultGuard);

enum class SubmoduleMode { exact, sampled };
std::vector<PMat> submodules(const PhiModule& D, SubmoduleMode mode, int budget = 0, std::uint64_t seed = 0);

// True when every isoclinic part is simple or a sum of copies of the standard
// simple module of its slope.
bool is_split(const PhiModule& D);
PhiModule ensure_split(const PhiModule& D, int max_factor = 6);

// <phi x, phi y> = c sigma(<x, y>) with v_p(c) = 1.
class PolarizedPhiModule {
 public:
  PolarizedPhiModule(PhiModule D, PMat J, int guard = kDefaultGuard);
  const PhiModule& module() const { return D_; }
  const PMat& gram() const { return J_; }
  const Padic& multiplier() const { return c_; }
  int genus() const { return D_.dim() / 2; }

 private:
  PhiModule D_;
  PMat J_;
  Padic c_;
};

// 0 -> D_T -> D -> D_B -> 0 with D_T pure of slope 1.
class SemiAbelianPhiModule {
 public:
  SemiAbelianPhiModule(PhiModule D, PMat toric, PMat gram_B, std::optional<PMat> lambda_T = {},
                       int guard = kDefaultGuard);
  const PhiModule& module() const { return D_; }
  const PMat& toric_basis() const { return T_; }
  // Columns: toric basis followed by the lift of the quotient basis.
  const PMat& adapted_basis() const { return Q_; }
  const PolarizedPhiModule& abelian_part() const { return *B_; }
  bool has_abelian_part() const { return B_.has_value(); }
  const PMat& lambda_T() const { return lambda_T_; }
  int toric_rank() const { return static_cast<int>(T_.cols()); }
  const PhiModule& quotient() const { return quotient_; }

 private:
  PhiModule D_;
  PMat T_, Q_, lambda_T_;
  PhiModule quotient_;
  std::optional<PolarizedPhiModule> B_;
};

}  // namespace isocrys
