#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "isocrys/group.hpp"
#include "isocrys/isocrystal.hpp"

namespace isocrys {

inline constexpr int kCharacterTableCeiling = 1024;

// chi(g) = sum_k mult[class(g)][k] zeta_e^k, e the exponent of G.
struct Character {
  int degree = 0;
  std::vector<std::vector<int>> mult;
  bool operator==(const Character& o) const { return mult == o.mult; }
};

class CharacterTable {
 public:
  // Burnside-Dixon modulo a prime P = 1 mod e.
  static CharacterTable compute(const FiniteGroup& G);

  int exponent() const { return e_; }
  int group_order() const { return order_; }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const std::vector<int>& class_of() const { return class_of_; }
  const std::vector<Character>& characters() const { return chars_; }
  int size() const { return static_cast<int>(chars_.size()); }
  long modulus() const { return P_; }

  Character twist(const Character& chi, long b) const;  // zeta -> zeta^b
  int index_of(const Character& chi) const;
  int galois_image(int chi, long b) const { return index_of(twist(chars_[chi], b)); }
  int dual(int chi) const { return galois_image(chi, -1); }

 private:
  int e_ = 1, order_ = 1;
  long P_ = 0;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
  std::vector<Character> chars_;
};

// One entry per eigenvalue (with repetition over conjugates): (order, multiplicity).
struct Eigenvalue {
  long order = 1;
  int multiplicity = 0;
  bool operator==(const Eigenvalue& o) const { return order == o.order && multiplicity == o.multiplicity; }
};
std::vector<Eigenvalue> eigen_multiplicities(const PMat& h, long m);
std::vector<Eigenvalue> eigen_multiplicities(const QMat& h, long m);
// Same, from the traces tr(h^j), j = 0..m-1.
std::vector<Eigenvalue> eigen_multiplicities_from_traces(const std::vector<Padic>& traces, int n);

struct PerturbateurWitness {
  int element = -1;
  std::vector<Eigenvalue> eigenvalues;
  bool perturbateur = false;
};
PerturbateurWitness perturbateur_check(const PMat& h, long m);
inline bool is_perturbateur(const PMat& h, long m) { return perturbateur_check(h, m).perturbateur; }
bool is_perturbateur(const Character& chi, int cls);

class GroupAction {
 public:
  GroupAction() = default;
  // rep[g] for every element; checks rep[0] = 1 and the multiplication table.
  GroupAction(FiniteGroup G, std::vector<PMat> rep, int guard = kDefaultGuard);
  // Images of the listed elements (which must generate G).
  static GroupAction from_generators(const FiniteGroup& G, const std::vector<std::pair<int, PMat>>& gens,
                                     int guard = kDefaultGuard);

  const FiniteGroup& group() const { return G_; }
  const PMat& operator()(int g) const { return rep_[g]; }
  int dim() const { return static_cast<int>(rep_[0].rows()); }
  const FieldPtr& field() const { return K_; }

  bool is_faithful() const;
  bool is_scalar() const;
  // rho(g) A = A sigma(rho(g)); throws ValidationError naming the element.
  void check_phi_compatible(const PhiModule& D) const;
  // rho(g)^T J rho(g) = J.
  void check_symplectic(const PMat& J) const;

  std::vector<Padic> traces(int g) const;  // tr rho(g^j), j < order(g)
  GroupAction direct_sum(const GroupAction& o) const;
  GroupAction dual() const;
  GroupAction frobenius_twist() const;
  // Action on a G-stable subspace with basis W.
  GroupAction restrict(const PMat& W, int guard = kDefaultGuard) const;

 private:
  FiniteGroup G_;
  std::vector<PMat> rep_;
  FieldPtr K_;
};

PerturbateurWitness perturbateur_check(const GroupAction& V, int g);

struct PerturbateurSearch {
  std::optional<int> element;
  bool homothety = false;
  PerturbateurWitness witness;
};
PerturbateurSearch find_perturbateur(const GroupAction& V);

struct IsotypicComponent {
  std::vector<int> characters;  // Galois orbit over the coefficient field
  PMat projector;
  PMat basis;
};
std::vector<IsotypicComponent> isotypic_decomposition(const GroupAction& V, const CharacterTable& T);
// Characters conjugate to chi over Q_p, together with their duals (sorted indices).
std::vector<int> conjugates_and_duals(const CharacterTable& T, int chi, long p);
bool is_K_elementary(const GroupAction& V, const std::vector<IsotypicComponent>& comps, const CharacterTable& T);

// Q8 acting on the slope 1/2 plane over Q_4 (names as in quaternion_group()).
GroupAction quaternion_action(const FieldPtr& Q4);
// B wr S_g acting blockwise on V^g.
GroupAction wreath_action(const GroupAction& V, const WreathProduct& W);

}  // namespace isocrys
