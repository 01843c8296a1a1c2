#include <algorithm>
#include <random>

#include "doctest.h"
#include "isocrys/bounds.hpp"
#include "isocrys/grouprep.hpp"
#include "oracles.hpp"

using namespace isocrys;

namespace {

PMat diag(const std::vector<Padic>& d) {
  const int n = static_cast<int>(d.size());
  PMat M = PMat::Constant(n, n, Padic::exact_zero(d[0].field()));
  for (int i = 0; i < n; ++i) M(i, i) = d[i];
  return M;
}

QMat random_invertible(std::mt19937_64& g, int n) {
  std::uniform_int_distribution<long> d(-3, 3);
  for (;;) {
    QMat P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) = Rational(d(g));
    if (!oracle::charpoly(P)[0].is_zero()) return P;
  }
}

long order_mod(long a, long m) {
  a = ((a % m) + m) % m;
  return m / std::gcd(a == 0 ? m : a, m);
}

std::vector<Eigenvalue> sorted(std::vector<Eigenvalue> v) {
  std::sort(v.begin(), v.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    return std::tie(a.order, a.multiplicity) < std::tie(b.order, b.multiplicity);
  });
  return v;
}

// Action through linear characters of G on K^n.
GroupAction linear_action(const FiniteGroup& G, const CharacterTable& T, const std::vector<int>& chars,
                          const FieldPtr& K) {
  Padic z = K->root_of_unity(T.exponent());
  std::vector<PMat> rep;
  for (int g = 0; g < G.order(); ++g) {
    std::vector<Padic> d;
    for (int c : chars) {
      const auto& m = T.characters()[c].mult[T.class_of()[g]];
      long k = std::find(m.begin(), m.end(), 1) - m.begin();
      d.push_back(z.pow(k));
    }
    rep.push_back(diag(d));
  }
  return GroupAction(G, rep);
}

long prime_1_mod(long e) {
  long p = e + 1;
  while (!is_prime(p)) p += e;
  return p;
}

}  // namespace

TEST_CASE("character tables of small groups satisfy the orthogonality relations") {
  auto groups = small_groups();
  for (const auto& ng : p_group_fixtures()) groups.push_back(ng);
  for (const auto& [name, G] : groups) {
    CAPTURE(name);
    CharacterTable T = CharacterTable::compute(G);
    CHECK(T.size() == static_cast<int>(T.classes().size()));
    long sq = 0;
    for (const auto& chi : T.characters()) sq += static_cast<long>(chi.degree) * chi.degree;
    CHECK(sq == G.order());
    const long e = T.exponent();
    // support[a][u] lists (k, multiplicity) with nonzero multiplicity
    std::vector<std::vector<std::vector<std::pair<long, long>>>> support(T.size());
    for (int a = 0; a < T.size(); ++a)
      for (const auto& row : T.characters()[a].mult) {
        support[a].emplace_back();
        for (long k = 0; k < e; ++k)
          if (row[k]) support[a].back().push_back({k, row[k]});
      }
    for (int a = 0; a < T.size(); ++a)
      for (int b = 0; b < T.size(); ++b) {
        std::vector<long> c(e, 0);
        for (size_t u = 0; u < T.classes().size(); ++u)
          for (auto [k, mk] : support[a][u])
            for (auto [l, ml] : support[b][u])
              c[((k - l) % e + e) % e] += static_cast<long>(T.classes()[u].size()) * mk * ml;
        auto r = oracle::reduce_cyclotomic(c, e);
        CHECK(r[0] == (a == b ? G.order() : 0));
        for (size_t i = 1; i < r.size(); ++i) CHECK(r[i] == 0);
      }
    CHECK(T.characters()[0].degree == 1);
  }
}

TEST_CASE("known character degrees") {
  auto degrees = [](const FiniteGroup& G) {
    std::vector<int> d;
    CharacterTable T = CharacterTable::compute(G);
    for (const auto& chi : T.characters()) d.push_back(chi.degree);
    return d;
  };
  CHECK(degrees(quaternion_group()) == std::vector<int>{1, 1, 1, 1, 2});
  CHECK(degrees(dihedral(6)) == std::vector<int>{1, 1, 2});
  CHECK(degrees(symmetric(4)) == std::vector<int>{1, 1, 2, 3, 3});
  CHECK(degrees(cyclic(5)) == std::vector<int>(5, 1));
}

TEST_CASE("eigenvalue multiplicities") {
  QMat m1 = -QMat::Identity(4, 4);
  CHECK(eigen_multiplicities(m1, 2) == std::vector<Eigenvalue>{{2, 4}});
  CHECK(eigen_multiplicities(QMat(QMat::Identity(3, 3)), 1) == std::vector<Eigenvalue>{{1, 3}});
  CHECK_FALSE(is_perturbateur(to_field(QMat(QMat::Identity(2, 2)), LocalField::unramified(3, 1, 20)), 1));

  FieldPtr Q4 = LocalField::unramified(2, 2, 30);
  GroupAction V = quaternion_action(Q4);
  const int k = V.group().index_of("k");
  CHECK(eigen_multiplicities(V(k), 4) == std::vector<Eigenvalue>{{4, 1}, {4, 1}});
  CHECK(is_perturbateur(V(k), 4));

  FieldPtr Q7 = LocalField::unramified(7, 1, 20);
  Padic z = Q7->root_of_unity(3);
  PerturbateurWitness w = perturbateur_check(diag({z, z, z * z}), 3);
  CHECK_FALSE(w.perturbateur);
  CHECK(w.eigenvalues == std::vector<Eigenvalue>{{3, 1}, {3, 2}});

  QMat notfinite = QMat::Identity(2, 2);
  notfinite(0, 1) = Rational(1);
  CHECK_THROWS_AS(eigen_multiplicities(notfinite, 6), ValidationError);
}

TEST_CASE("eigenvalue multiplicities of conjugated diagonal matrices") {
  std::mt19937_64 g(7);
  FieldPtr K = LocalField::unramified(3, 2, 30);
  Padic z = K->root_of_unity(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(g() % 3);
    std::vector<long> a(n);
    std::vector<Padic> d;
    for (auto& x : a) {
      x = static_cast<long>(g() % 8);
      d.push_back(z.pow(x));
    }
    PMat P = to_field(random_invertible(g, n), K);
    PMat h = inverse(P) * diag(d) * P;
    std::vector<Eigenvalue> expect;
    for (long v = 0; v < 8; ++v) {
      int c = static_cast<int>(std::count(a.begin(), a.end(), v));
      if (c) expect.push_back({order_mod(v, 8), c});
    }
    CHECK(eigen_multiplicities(h, 8) == sorted(expect));
  }
}

TEST_CASE("perturbateurs are stable under sums, duals and Frobenius twists") {
  std::mt19937_64 g(11);
  FieldPtr K = LocalField::unramified(3, 2, 30);
  Padic z = K->root_of_unity(8);
  auto random_h = [&](int n) {
    std::vector<Padic> d;
    for (int i = 0; i < n; ++i) d.push_back(z.pow(static_cast<long>(g() % 8)));
    PMat P = to_field(random_invertible(g, n), K);
    return PMat(inverse(P) * diag(d) * P);
  };
  int both = 0;
  for (int trial = 0; trial < 120; ++trial) {
    PMat h = random_h(2 + static_cast<int>(g() % 3));
    PMat k = random_h(2 + static_cast<int>(g() % 3));
    if (!is_perturbateur(h, 8) || !is_perturbateur(k, 8)) continue;
    ++both;
    CHECK(is_perturbateur(block_diagonal<Padic>({h, k}), 8));
    CHECK(is_perturbateur(PMat(inverse(h).transpose()), 8));
    CHECK(is_perturbateur(frobenius(h), 8));
  }
  CHECK(both > 10);
}

TEST_CASE("irreducible characters of degree at least 2 have perturbateur classes") {
  auto groups = small_groups();
  for (const auto& ng : p_group_fixtures()) groups.push_back(ng);
  for (const auto& [name, G] : groups) {
    CAPTURE(name);
    CharacterTable T = CharacterTable::compute(G);
    for (const auto& chi : T.characters()) {
      if (chi.degree < 2) continue;
      bool found = false;
      for (size_t u = 0; u < T.classes().size() && !found; ++u) found = is_perturbateur(chi, static_cast<int>(u));
      CHECK(found);
    }
  }
}

TEST_CASE("the quaternion action") {
  FieldPtr Q4 = LocalField::unramified(2, 2, 30);
  GroupAction V = quaternion_action(Q4);
  CHECK(V.dim() == 2);
  CHECK(V.is_faithful());
  CHECK_FALSE(V.is_scalar());
  V.check_phi_compatible(simple_isocrystal(Q4, 1, 2));
  PMat J(2, 2);
  J << Padic::exact_zero(Q4), Q4->one(), -Q4->one(), Padic::exact_zero(Q4);
  V.check_symplectic(J);
  CHECK_THROWS_AS(V.check_phi_compatible(PhiModule(Q4, QMat(QMat::Identity(2, 2)))), ValidationError);

  PerturbateurSearch s = find_perturbateur(V);
  REQUIRE(s.element.has_value());
  CHECK_FALSE(s.homothety);
  CHECK(s.witness.perturbateur);
  CHECK(V.group().element_order(*s.element) == 4);
}

TEST_CASE("homothety actions") {
  FiniteGroup C2 = cyclic(2);
  FieldPtr Q3 = LocalField::unramified(3, 1, 20);
  GroupAction minus(C2, {identity(3, Q3), to_field(QMat(-QMat::Identity(3, 3)), Q3)});
  PerturbateurSearch s = find_perturbateur(minus);
  CHECK(s.homothety);
  CHECK_FALSE(s.element.has_value());

  FieldPtr Q5 = LocalField::unramified(5, 1, 20);
  FiniteGroup C4 = cyclic(4);
  Padic i = Q5->root_of_unity(4);
  GroupAction scal = GroupAction::from_generators(C4, {{C4.generators()[0], diag({i, i})}});
  CHECK(find_perturbateur(scal).homothety);

  // trivial + trivial + sign is neither K-elementary nor homothetic.
  GroupAction split(C2, {identity(3, Q3), diag({Q3->one(), Q3->one(), -Q3->one()})});
  CHECK_THROWS_AS(find_perturbateur(split), InternalContradiction);
}

TEST_CASE("invalid actions are rejected") {
  FiniteGroup C2 = cyclic(2);
  FieldPtr Q3 = LocalField::unramified(3, 1, 20);
  CHECK_THROWS_AS(GroupAction(C2, {identity(2, Q3), diag({Q3->one(), Padic(Q3, Rational(2))})}), ValidationError);
  CHECK_THROWS_AS(GroupAction(C2, {identity(2, Q3)}), ValidationError);
}

TEST_CASE("isotypic decomposition examples") {
  FiniteGroup C2 = cyclic(2);
  CharacterTable T2 = CharacterTable::compute(C2);
  FieldPtr Q3 = LocalField::unramified(3, 1, 20);
  GroupAction triv(C2, {identity(2, Q3), identity(2, Q3)});
  auto c1 = isotypic_decomposition(triv, T2);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].basis.cols() == 2);
  CHECK(is_K_elementary(triv, c1, T2));

  GroupAction sign(C2, {identity(2, Q3), diag({Q3->one(), -Q3->one()})});
  auto c2 = isotypic_decomposition(sign, T2);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].basis.cols() == 1);
  CHECK(c2[1].basis.cols() == 1);
  CHECK_FALSE(is_K_elementary(sign, c2, T2));

  FieldPtr Q4 = LocalField::unramified(2, 2, 30);
  GroupAction V = quaternion_action(Q4);
  GroupAction V2 = V.direct_sum(V);
  CharacterTable T8 = CharacterTable::compute(V.group());
  auto c3 = isotypic_decomposition(V2, T8);
  REQUIRE(c3.size() == 1);
  CHECK(T8.characters()[c3[0].characters[0]].degree == 2);
  CHECK(c3[0].basis.cols() == 4);

  // V + V^dual for a character that is not self-dual.
  FiniteGroup C3 = cyclic(3);
  CharacterTable T3 = CharacterTable::compute(C3);
  FieldPtr Q7 = LocalField::unramified(7, 1, 20);
  int chi = 1;
  GroupAction L = linear_action(C3, T3, {chi}, Q7);
  GroupAction LL = L.direct_sum(L.dual());
  auto c4 = isotypic_decomposition(LL, T3);
  CHECK(c4.size() == 2);
  CHECK(is_K_elementary(LL, c4, T3));
  GroupAction L01 = linear_action(C3, T3, {0, chi}, Q7);
  CHECK_FALSE(is_K_elementary(L01, isotypic_decomposition(L01, T3), T3));
}

TEST_CASE("isotypic projectors are idempotent, equivariant and complete") {
  FieldPtr Q7 = LocalField::unramified(7, 1, 20);
  FiniteGroup S3 = symmetric(3);
  CharacterTable T = CharacterTable::compute(S3);
  std::vector<PMat> rep;
  std::mt19937_64 gen(3);
  GroupAction base;
  {
    // Regular representation, conjugated by a random rational matrix.
    const int n = S3.order();
    QMat P = random_invertible(gen, n);
    PMat Pk = to_field(P, Q7), Pi = inverse(Pk);
    for (int g = 0; g < n; ++g) {
      PMat M = PMat::Constant(n, n, Padic::exact_zero(Q7));
      for (int x = 0; x < n; ++x) M(S3.mul(g, x), x) = Q7->one();
      rep.push_back(Pi * M * Pk);
    }
    base = GroupAction(S3, rep);
  }
  auto comps = isotypic_decomposition(base, T);
  CHECK(comps.size() == 3);
  PMat sum = PMat::Constant(6, 6, Padic::exact_zero(Q7));
  for (const auto& c : comps) {
    CHECK(is_zero(PMat(c.projector * c.projector - c.projector)));
    for (int g = 0; g < S3.order(); ++g) CHECK(is_zero(PMat(c.projector * base(g) - base(g) * c.projector)));
    for (const auto& d : comps)
      if (&c != &d) CHECK(is_zero(PMat(c.projector * d.projector)));
    const int deg = T.characters()[c.characters[0]].degree;
    CHECK(c.basis.cols() == deg * deg);
    sum += c.projector;
  }
  CHECK(is_zero(PMat(sum - identity(6, Q7))));

  FieldPtr Q5 = LocalField::unramified(5, 1, 20);
  // Cube roots of unity are missing from Q_5.
  GroupAction triv5 = GroupAction::from_generators(
      S3, {{S3.generators()[0], to_field(QMat(QMat::Identity(1, 1)), Q5)},
           {S3.generators()[1], to_field(QMat(QMat::Identity(1, 1)), Q5)}});
  CHECK_THROWS_AS(isotypic_decomposition(triv5, T), FieldIncompatibility);
}

TEST_CASE("K-elementary actions through linear characters have cyclic image") {
  std::mt19937_64 gen(5);
  int elementary = 0;
  for (const auto& [name, G] : small_groups()) {
    CAPTURE(name);
    CharacterTable T = CharacterTable::compute(G);
    std::vector<int> linear;
    for (int c = 0; c < T.size(); ++c)
      if (T.characters()[c].degree == 1) linear.push_back(c);
    FieldPtr K = LocalField::unramified(prime_1_mod(T.exponent()), 1, 20);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<int> chars;
      int chi = linear[gen() % linear.size()];
      const int n = 1 + static_cast<int>(gen() % 3);
      for (int i = 0; i < n; ++i) chars.push_back(gen() % 2 ? chi : T.dual(chi));
      if (trial % 3 == 2) chars.push_back(linear[gen() % linear.size()]);
      GroupAction V = linear_action(G, T, chars, K);
      if (!is_K_elementary(V, isotypic_decomposition(V, T), T)) continue;
      ++elementary;
      bool cyclic_image = false;
      for (int g = 0; g < G.order() && !cyclic_image; ++g) {
        std::vector<PMat> powers;
        for (int j = 0; j < G.element_order(g); ++j) powers.push_back(V(G.pow(g, j)));
        cyclic_image = true;
        for (int h = 0; h < G.order() && cyclic_image; ++h)
          cyclic_image = std::any_of(powers.begin(), powers.end(),
                                     [&](const PMat& M) { return is_zero(PMat(M - V(h))); });
      }
      CHECK(cyclic_image);
    }
  }
  CHECK(elementary > 20);
}

TEST_CASE("wreath actions") {
  FieldPtr Q4 = LocalField::unramified(2, 2, 30);
  GroupAction V = quaternion_action(Q4);
  WreathProduct W = wreath_with_symmetric(V.group(), 2);
  GroupAction VW = wreath_action(V, W);
  CHECK(VW.dim() == 4);
  CHECK(VW.group().order() == 128);
  CHECK(VW.is_faithful());
  VW.check_phi_compatible(direct_sum({simple_isocrystal(Q4, 1, 2), simple_isocrystal(Q4, 1, 2)}));
  CharacterTable T = CharacterTable::compute(VW.group());
  auto comps = isotypic_decomposition(VW, T);
  CHECK(comps.size() == 1);
  CHECK(find_perturbateur(VW).element.has_value());
}
