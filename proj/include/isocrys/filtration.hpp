#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isocrys/grouprep.hpp"
#include "isocrys/isocrystal.hpp"
#include "isocrys/symplectic.hpp"

namespace isocrys {

inline constexpr int kDefaultSampleBudget = 200;

struct Filtration {
  FieldPtr L;
  PMat basis;  // columns span F inside D_L
  int dim() const { return static_cast<int>(basis.cols()); }
};

// G acting on L/K on the right: sigma_{gh} = sigma_h o sigma_g.  Each
// automorphism is stored through the image of the uniformizer.
class GaloisSetup {
 public:
  GaloisSetup() = default;
  // images[g] = sigma_g(u); for unramified L only the trivial group is allowed.
  GaloisSetup(FiniteGroup G, FieldPtr L, std::vector<Padic> images);
  // Automorphisms named in L's spec (or "id") attached to generating elements.
  static GaloisSetup from_generators(const FiniteGroup& G, const FieldPtr& L,
                                     const std::vector<std::pair<int, std::string>>& gens);
  static GaloisSetup trivial(const FieldPtr& K);

  const FiniteGroup& group() const { return G_; }
  const FieldPtr& top() const { return L_; }
  const FieldPtr& base() const { return K_; }
  const Padic& image(int g) const { return img_[g]; }

  Padic apply(int g, const Padic& a) const;
  PMat apply(int g, const PMat& M) const;

 private:
  FiniteGroup G_;
  FieldPtr L_, K_;
  std::vector<Padic> img_;
};

// f_h = rho(h^{-1}) carries F onto sigma_h^{-1}(F); f_{gh} = f_h f_g.
struct DescentDatum {
  std::vector<PMat> maps;
};
DescentDatum descent_datum(const GroupAction& action);
bool check_cocycle(const DescentDatum& f, const FiniteGroup& G);
bool descent_carries(const DescentDatum& f, const Filtration& F, const GaloisSetup& S);

struct LedgerEntry {
  PMat N;
  int dim = 0;
  int t_H = 0;
  Rational bound;
  bool ok = true;
};

struct AdmissibilityReport {
  bool admissible = true;
  SubmoduleMode mode = SubmoduleMode::exact;
  int samples = 0;
  std::vector<LedgerEntry> ledger;
  std::optional<std::size_t> violation;  // index into ledger
};

int t_H(const Filtration& F, const PMat& N);
AdmissibilityReport is_admissible(const PhiModule& D, const Filtration& F, SubmoduleMode mode,
                                  std::uint64_t seed = 0, int budget = kDefaultSampleBudget);
// Exact mode, falling back to sampled mode when a slope is repeated.
AdmissibilityReport check_admissible(const PhiModule& D, const Filtration& F, SubmoduleMode preferred,
                                     std::uint64_t seed = 0, int budget = kDefaultSampleBudget);

// rho(h) F = sigma_h(F) for every h.
bool is_diagonally_stable(const Filtration& F, const GroupAction& action, const GaloisSetup& S);

// Invariants of the semilinear action v -> M[h] sigma_h(v) on the span of E.
PMat galois_descend(const PMat& E, const std::vector<PMat>& M, const GaloisSetup& S);
// Invariant basis of D_L for the action v -> rho(h)^{-1} sigma_h(v); its
// K-rational combinations are exactly the diagonally stable subspaces.
PMat descended_basis(const GroupAction& action, const GaloisSetup& S);

Filtration two_slope_filtration(const PhiModule& D, const PMat& J, const GroupAction& action,
                                const GaloisSetup& S, std::uint64_t seed, int budget = kDefaultSampleBudget);

struct SupersingularRoute {
  bool homothety = false;
  int element = 0;
  std::optional<int> seed_intersection;  // dim(F cap hF) of the eigenbasis seed, when it could be built
  int attempts = 0;
};
Filtration supersingular_filtration(const PhiModule& D, const PMat& J, const GroupAction& action,
                                    const GaloisSetup& S, std::uint64_t seed, int budget = kDefaultSampleBudget,
                                    SupersingularRoute* route = nullptr);

struct EAdmSummand {
  PMat basis;  // in the coordinates of D
  PhiModule module;
  PMat gram;
  GroupAction action;
  std::vector<Rational> slopes;
};
std::vector<EAdmSummand> decompose_for_EAdm(const PhiModule& D, const PMat& J, const GroupAction& action);

struct EAdmVerification {
  bool lagrangian = false;
  bool contains_torus = false;
  bool admissible = false;
  bool sub_admissible = false;
  bool quotient_admissible = false;
  bool stable = false;
  bool cocycle = false;
  bool descent = false;
  AdmissibilityReport full, sub, quotient;
  bool ok() const {
    return lagrangian && contains_torus && admissible && sub_admissible && quotient_admissible && stable &&
           cocycle && descent;
  }
  // Name of the first failed property, empty when ok.
  std::string failure() const;
};

struct EAdmPiece {
  std::vector<Rational> slopes;
  int dim = 0;
  std::string method;  // "two-slope", "supersingular-homothety", "supersingular-perturbateur"
};

struct EAdmResult {
  Filtration F;
  DescentDatum datum;
  EAdmVerification verification;
  std::vector<EAdmPiece> pieces;
};

// Action of G on the quotient D/D_T in the adapted basis.
GroupAction quotient_action(const SemiAbelianPhiModule& D, const GroupAction& action);

EAdmVerification verify_EAdm(const SemiAbelianPhiModule& D, const GroupAction& action, const GaloisSetup& S,
                             const Filtration& F, SubmoduleMode mode, std::uint64_t seed,
                             int budget = kDefaultSampleBudget);

EAdmResult find_admissible_stable_filtration(const SemiAbelianPhiModule& D, const GroupAction& action,
                                             const GaloisSetup& S, std::uint64_t seed,
                                             SubmoduleMode mode = SubmoduleMode::exact,
                                             int budget = kDefaultSampleBudget);

}  // namespace isocrys
