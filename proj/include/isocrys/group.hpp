#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace isocrys {

// Finite group given by its multiplication table.  Element 0 is the identity.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  // Validates closure, associativity, identity and inverses; reorders so the
  // identity comes first.
  static FiniteGroup from_table(std::vector<std::string> names, const std::vector<std::vector<int>>& table);

  // Trusted flat table with identity at index 0; no validation.
  static FiniteGroup from_raw(int n, std::vector<int> table, std::vector<std::string> names = {});

  // Closure of the generators under `mul`.  E must be ordered.
  template <class E, class Mul, class Name>
  static FiniteGroup generate(const E& one, const std::vector<E>& gens, Mul mul, Name name, std::size_t limit = 1u << 16);

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int pow(int a, long k) const;
  int element_order(int a) const { return ord_[a]; }
  int exponent() const;
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }

  const std::string& name(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  int index_of(const std::string& s) const;

  const std::vector<int>& generators() const { return gens_; }
  void set_generators(std::vector<int> g) { gens_ = std::move(g); }

  std::vector<std::vector<int>> table() const;
  std::vector<std::vector<int>> conjugacy_classes() const;
  std::vector<int> class_of() const;  // element -> class index
  std::vector<int> center() const;
  int derived_subgroup_order() const;
  // Prime p if |G| is a power of p (p = 1 for the trivial group), else 0.
  long prime_power_base() const;
  bool is_abelian() const;

 private:
  void finish();

  int n_ = 0;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::vector<int> ord_;
  std::vector<std::string> names_;
  std::vector<int> gens_;
};

template <class E, class Mul, class Name>
FiniteGroup FiniteGroup::generate(const E& one, const std::vector<E>& gens, Mul mul, Name name, std::size_t limit) {
  std::map<E, int> index{{one, 0}};
  std::vector<E> elems{one};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const E& g : gens) {
      E h = mul(elems[i], g);
      if (index.emplace(h, static_cast<int>(elems.size())).second) {
        elems.push_back(h);
        if (elems.size() > limit) throw std::length_error("group generation exceeded the element limit");
      }
    }
  }
  FiniteGroup G;
  G.n_ = static_cast<int>(elems.size());
  G.table_.resize(static_cast<std::size_t>(G.n_) * G.n_);
  for (int a = 0; a < G.n_; ++a)
    for (int b = 0; b < G.n_; ++b) G.table_[static_cast<std::size_t>(a) * G.n_ + b] = index.at(mul(elems[a], elems[b]));
  for (const E& e : elems) G.names_.push_back(name(e));
  for (const E& g : gens) G.gens_.push_back(index.at(g));
  G.finish();
  return G;
}

// Elements a^i x^j (i < m, j < n) with x a x^-1 = a^r and x^n = a^s.
FiniteGroup metacyclic(int m, int n, int r, int s);
FiniteGroup cyclic(int n);
FiniteGroup dihedral(int order);
FiniteGroup dicyclic(int order);
FiniteGroup symmetric(int k);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
// N x| H where act[h][n] is the image of n under h; act must be a homomorphism H -> Aut(N).
FiniteGroup semidirect(const FiniteGroup& N, const FiniteGroup& H, const std::vector<std::vector<int>>& act);

// Elements of the wreath product B wr S_g: base coordinates and a permutation.
struct WreathElement {
  std::vector<int> base;
  std::vector<int> perm;  // perm[j] = image of j
  bool operator<(const WreathElement& o) const { return std::tie(base, perm) < std::tie(o.base, o.perm); }
  bool operator==(const WreathElement& o) const { return base == o.base && perm == o.perm; }
};
WreathElement wreath_mul(const FiniteGroup& B, const WreathElement& x, const WreathElement& y);
struct WreathProduct {
  FiniteGroup group;
  std::vector<WreathElement> elements;
};
WreathProduct wreath_with_symmetric(const FiniteGroup& B, int g);

// Sylow p-subgroup as an abstract group with its embedding into G.
struct Subgroup {
  FiniteGroup group;
  std::vector<int> embedding;
};
Subgroup sylow_subgroup(const FiniteGroup& G, long p);
Subgroup subgroup_generated(const FiniteGroup& G, const std::vector<int>& gens);

struct NamedGroup {
  std::string name;
  FiniteGroup group;
};
// One representative of each isomorphism class of order <= 16.
std::vector<NamedGroup> small_groups();
// Assorted p-groups of order <= 64 (not exhaustive above 16).
std::vector<NamedGroup> p_group_fixtures();
FiniteGroup quaternion_group();

// Cheap isomorphism invariant.
std::string group_signature(const FiniteGroup& G);

}  // namespace isocrys
