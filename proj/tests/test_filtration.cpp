#include <numeric>
#include <random>

#include "doctest.h"
#include "filtration_fixtures.hpp"
#include "isocrys/precision.hpp"
#include "oracles.hpp"

using namespace isocrys;
using namespace fixture;

namespace {

QMat random_qmat(std::mt19937_64& g, int n, int m, long range = 3) {
  std::uniform_int_distribution<long> d(-range, range);
  QMat M(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = Rational(d(g));
  return M;
}

QMat random_invertible(std::mt19937_64& g, int n) {
  for (;;) {
    QMat P = random_qmat(g, n, n);
    if (oracle::rank_ff(P) == n) return P;
  }
}

std::vector<oracle::AdmissibilityEntry> sorted_ledger(const AdmissibilityReport& r) {
  std::vector<oracle::AdmissibilityEntry> out;
  for (const auto& e : r.ledger) out.push_back({e.dim, e.t_H, e.bound});
  std::sort(out.begin(), out.end());
  return out;
}

Filtration line(const FieldPtr& K, std::vector<long> v) {
  PMat B(static_cast<Eigen::Index>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) B(static_cast<Eigen::Index>(i), 0) = Padic(K, Rational(v[i]));
  return {K, B};
}

}  // namespace

TEST_CASE("t_H on the ordinary plane") {
  auto K = LocalField::unramified(3, 1, 40);
  Filtration F = line(K, {1, 1});
  CHECK(t_H(F, cols(K, 2, {0})) == 0);
  CHECK(t_H(F, cols(K, 2, {0, 1})) == 1);
  CHECK(t_H(F, cols(K, 2, {})) == 0);
}

TEST_CASE("admissibility ledgers on diag(1, p)") {
  auto K = LocalField::unramified(3, 1, 40);
  PhiModule D(diag(K, {1, 3}));
  auto rep = is_admissible(D, line(K, {1, 1}), SubmoduleMode::exact);
  CHECK(rep.admissible);
  std::vector<oracle::AdmissibilityEntry> want{{0, 0, Rational(0)}, {1, 0, Rational(0)}, {1, 0, Rational(1)},
                                               {2, 1, Rational(1)}};
  std::sort(want.begin(), want.end());
  CHECK(sorted_ledger(rep) == want);

  CHECK(is_admissible(D, line(K, {0, 1}), SubmoduleMode::exact).admissible);

  auto bad = is_admissible(D, line(K, {1, 0}), SubmoduleMode::exact);
  REQUIRE_FALSE(bad.admissible);
  REQUIRE(bad.violation);
  const LedgerEntry& v = bad.ledger[*bad.violation];
  CHECK(v.dim == 1);
  CHECK(v.t_H == 1);
  CHECK(v.bound == Rational(0));
  CHECK(same_span(v.N, cols(K, 2, {0})));

  PhiModule S = simple_isocrystal(K, 1, 2);
  for (auto w : std::vector<std::vector<long>>{{1, 0}, {0, 1}, {1, 5}}) CHECK(is_admissible(S, line(K, w), SubmoduleMode::exact).admissible);
}

TEST_CASE("exact admissibility agrees with the rational oracle") {
  struct Simple {
    long s, r;
  };
  const std::vector<Simple> menu{{0, 1}, {1, 3}, {1, 2}, {2, 3}, {1, 1}};
  std::mt19937_64 g(11);
  int checked = 0, inadmissible = 0;
  for (long p : {2L, 3L}) {
    for (int mask = 1; mask < 32; ++mask) {
      std::vector<int> sizes;
      std::vector<Rational> slopes;
      int n = 0;
      long total = 0;
      for (int b = 0; b < 5; ++b)
        if (mask >> b & 1) {
          sizes.push_back(static_cast<int>(menu[b].r));
          slopes.push_back(Rational(menu[b].s, menu[b].r));
          n += static_cast<int>(menu[b].r);
          total += menu[b].s;
        }
      if (n > 6) continue;
      QMat P = random_invertible(g, n);
      QMat Pinv = inverse(P);
      for (int trial = 0; trial < 4; ++trial) {
        QMat F = random_qmat(g, n, static_cast<int>(total));
        // Some trials put F inside a submodule to force violations.
        if (trial >= 2 && total > 0 && total < n) {
          QMat N = Pinv.leftCols(sizes[0]);
          if (N.cols() >= total) F = N * random_qmat(g, static_cast<int>(N.cols()), static_cast<int>(total));
        }
        if (oracle::rank_ff(F) != total) continue;
        auto [want, ok] = oracle::admissibility(sizes, slopes, Pinv, F);
        auto rep = with_escalation(40, [&](int prec) {
          auto K = LocalField::unramified(p, 1, prec);
          std::vector<PhiModule> parts;
          for (int b = 0; b < 5; ++b)
            if (mask >> b & 1) parts.push_back(simple_isocrystal(K, menu[b].s, menu[b].r));
          PhiModule D = direct_sum(parts).change_basis(to_field(P, K));
          return is_admissible(D, Filtration{K, to_field(F, K)}, SubmoduleMode::exact);
        });
        CHECK(rep.admissible == ok);
        CHECK(sorted_ledger(rep) == want);
        ++checked;
        if (!ok) ++inadmissible;
      }
    }
  }
  CHECK(checked > 60);
  CHECK(inadmissible > 5);
}

TEST_CASE("inadmissible verdicts carry a checkable violation") {
  auto K = LocalField::unramified(2, 1, 40);
  std::mt19937_64 g(5);
  PhiModule D = direct_sum({simple_isocrystal(K, 0, 1), simple_isocrystal(K, 0, 1), simple_isocrystal(K, 1, 1),
                            simple_isocrystal(K, 1, 2)});
  int seen = 0;
  for (int t = 0; t < 30; ++t) {
    QMat F = random_qmat(g, 5, 2);
    if (t % 2) F.row(2).setZero(), F.row(3).setZero(), F.row(4).setZero();
    if (oracle::rank_ff(F) != 2) continue;
    auto rep = is_admissible(D, Filtration{K, to_field(F, K)}, SubmoduleMode::sampled, 100 + t, 40);
    if (rep.admissible) continue;
    ++seen;
    const LedgerEntry& v = rep.ledger.at(*rep.violation);
    CHECK(D.is_stable(v.N));
    // Independent recount of the violation.
    int inter = static_cast<int>(v.N.cols()) + 2 - rank(hstack(v.N, to_field(F, K)));
    Rational bound = v.dim == 5 ? t_N(D) : t_N(D.restrict(v.N));
    CHECK(bound == v.bound);
    CHECK(inter == v.t_H);
    CHECK((v.dim == 5 ? Rational(inter) != bound : Rational(inter) > bound));
  }
  CHECK(seen > 3);
}

TEST_CASE("Galois setups validate the correspondence") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  auto L = sqrt2_over(Q2);
  GaloisSetup S = cyclic_setup(L, 2, "conj");
  CHECK(S.apply(1, L->uniformizer()) == -L->uniformizer());
  CHECK_THROWS_AS(GaloisSetup(cyclic(2), L, {L->uniformizer(), L->uniformizer()}), ValidationError);
  CHECK_THROWS_AS(cyclic_setup(L, 4, "conj"), ValidationError);

  auto Q4 = LocalField::unramified(2, 2, 40);
  auto M = c4_over(Q4);
  GaloisSetup S4 = cyclic_setup(M, 4, "tau");
  const int g = S4.group().generators()[0];
  Padic u = M->uniformizer();
  CHECK(S4.image(g) == u * u * u - Padic(M, Rational(3)) * u);
  CHECK(S4.apply(S4.group().pow(g, 2), u) == S4.apply(g, S4.apply(g, u)));
  // zeta_16 + zeta_16^{-1} has a conjugate -u.
  CHECK(S4.image(S4.group().pow(g, 2)) == -u);
}

TEST_CASE("diagonal stability") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  auto L = sqrt2_over(Q2);
  GaloisSetup S = cyclic_setup(L, 2, "conj");
  GroupAction minus = cyclic_action(2, scalar_matrix(2, Padic(Q2, Rational(-1))));
  PMat B(2, 1);
  B << L->one(), L->uniformizer();
  CHECK_FALSE(is_diagonally_stable(Filtration{L, B}, minus, S));
  B(1, 0) = L->one();
  CHECK(is_diagonally_stable(Filtration{L, B}, minus, S));
  CHECK(is_diagonally_stable(Filtration{Q2, to_field(QMat::Identity(2, 1), Q2)}, trivial_action(2, Q2),
                             GaloisSetup::trivial(Q2)));
}

TEST_CASE("Galois descent") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  auto L = sqrt2_over(Q2);
  GaloisSetup S = cyclic_setup(L, 2, "conj");

  PMat E = identity(1, L);
  PMat one = identity(1, Q2);
  PMat W = galois_descend(E, {one, one}, S);
  REQUIRE(W.cols() == 1);
  CHECK(in_subfield(W, Q2));
  CHECK_FALSE(W(0, 0).is_zero());

  // v -> swap(conj(v)) on L^2.
  PMat swap(2, 2);
  swap << Padic::exact_zero(Q2), Q2->one(), Q2->one(), Padic::exact_zero(Q2);
  PMat W2 = galois_descend(identity(2, L), {identity(2, Q2), swap}, S);
  REQUIRE(W2.cols() == 2);
  CHECK(rank(W2) == 2);
  PMat swapL = embed(swap, L);
  CHECK(is_zero(PMat(swapL * S.apply(1, W2) - W2)));

  GaloisSetup T = GaloisSetup::trivial(Q2);
  PMat X = to_field(QMat::Identity(3, 3), Q2);
  CHECK(same_span(galois_descend(X, {identity(3, Q2)}, T), X));
}

TEST_CASE("stable subspaces are exactly the K-rational points of the descended space") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  auto L = sqrt2_over(Q2);
  GaloisSetup S = cyclic_setup(L, 2, "conj");
  PMat swap(3, 3);
  swap << Padic::exact_zero(Q2), Q2->one(), Padic::exact_zero(Q2), Q2->one(), Padic::exact_zero(Q2),
      Padic::exact_zero(Q2), Padic::exact_zero(Q2), Padic::exact_zero(Q2), -Q2->one();
  GroupAction act = cyclic_action(2, swap);
  PMat W = descended_basis(act, S);
  std::mt19937_64 g(3);
  for (int t = 0; t < 20; ++t) {
    int d = 1 + t % 2;
    PMat C = to_field(random_qmat(g, 3, d), Q2);
    if (rank(C) != d) continue;
    Filtration F{L, W * embed(C, L)};
    CHECK(is_diagonally_stable(F, act, S));
    // Conversely its invariants recover it.
    std::vector<PMat> M{identity(3, Q2), swap};
    PMat inv = galois_descend(F.basis, M, S);
    CHECK(inv.cols() == d);
    CHECK(same_span(inv, F.basis));
    // A non-rational twist is not stable.
    PMat twisted = F.basis;
    twisted(0, 0) += L->uniformizer() * twisted(1, 0) + L->uniformizer();
    if (!same_span(twisted, F.basis)) {
      bool stable = is_diagonally_stable(Filtration{L, twisted}, act, S);
      if (!stable) CHECK_THROWS_AS(galois_descend(twisted, M, S), ValidationError);
    }
  }
}

TEST_CASE("descent data satisfy the cocycle law") {
  auto Q4 = LocalField::unramified(2, 2, 40);
  GroupAction Q8 = quaternion_action(Q4);
  DescentDatum f = descent_datum(Q8);
  CHECK(check_cocycle(f, Q8.group()));
  DescentDatum broken = f;
  std::swap(broken.maps[1], broken.maps[2]);
  CHECK_FALSE(check_cocycle(broken, Q8.group()));
}

TEST_CASE("two-slope filtrations") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  {
    PhiModule D(diag(Q2, {1, 2}));
    PMat J = pairing(Q2, 2, {{0, 1}});
    Filtration F = two_slope_filtration(D, J, trivial_action(2, Q2), GaloisSetup::trivial(Q2), 1);
    REQUIRE(F.dim() == 1);
    CHECK_FALSE(F.basis(0, 0).is_zero());
    CHECK_FALSE(F.basis(1, 0).is_zero());
    CHECK(is_admissible(D, F, SubmoduleMode::exact).admissible);
  }
  {
    PhiModule D(diag(Q2, {1, 1, 2, 2}));
    PMat J = pairing(Q2, 4, {{0, 2}, {1, 3}});
    Filtration F = two_slope_filtration(D, J, trivial_action(4, Q2), GaloisSetup::trivial(Q2), 2);
    REQUIRE(F.dim() == 2);
    CHECK(intersection_dim(F.basis, cols(Q2, 4, {0, 1})) == 0);
    CHECK(intersection_dim(F.basis, cols(Q2, 4, {2, 3})) == 0);
    CHECK(is_lagrangian(SymplecticSpace(J), F.basis));
  }
  {
    auto L = sqrt2_over(Q2);
    GaloisSetup S = cyclic_setup(L, 2, "conj");
    PhiModule D(diag(Q2, {1, 2}));
    PMat J = pairing(Q2, 2, {{0, 1}});
    GroupAction minus = cyclic_action(2, scalar_matrix(2, Padic(Q2, Rational(-1))));
    Filtration F = two_slope_filtration(D, J, minus, S, 3);
    CHECK(is_diagonally_stable(F, minus, S));
    CHECK(F.L == L);
  }
}

TEST_CASE("supersingular filtrations") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  auto L = sqrt2_over(Q2);
  GaloisSetup S = cyclic_setup(L, 2, "conj");
  PhiModule D = simple_isocrystal(Q2, 1, 2);
  PMat J = pairing(Q2, 2, {{0, 1}});
  GroupAction minus = cyclic_action(2, scalar_matrix(2, Padic(Q2, Rational(-1))));
  SupersingularRoute r;
  Filtration F = supersingular_filtration(D, J, minus, S, 4, kDefaultSampleBudget, &r);
  CHECK(r.homothety);
  CHECK(F.dim() == 1);
  CHECK(is_admissible(D, F, SubmoduleMode::exact).admissible);

  auto Q4 = LocalField::unramified(2, 2, 40);
  auto M = c4_over(Q4);
  GaloisSetup S4 = cyclic_setup(M, 4, "tau");
  PMat k = quaternion_action(Q4)(quaternion_group().index_of("k"));
  for (int g : {1, 2}) {
    std::vector<PhiModule> parts(g, simple_isocrystal(Q4, 1, 2));
    PhiModule Dg = direct_sum(parts);
    std::vector<PMat> ks(g, k);
    std::vector<std::pair<int, int>> pr;
    for (int i = 0; i < g; ++i) pr.push_back({2 * i, 2 * i + 1});
    PMat Jg = pairing(Q4, 2 * g, pr);
    GroupAction act = cyclic_action(4, block_diagonal(ks));
    act.check_phi_compatible(Dg);
    act.check_symplectic(Jg);
    SupersingularRoute rk;
    Filtration Fk = supersingular_filtration(Dg, Jg, act, S4, 7, kDefaultSampleBudget, &rk);
    CHECK_FALSE(rk.homothety);
    REQUIRE(Fk.dim() == g);
    CHECK(intersection_dim(Fk.basis, PMat(embed(act(rk.element), M) * Fk.basis)) <= 1);
    CHECK(is_diagonally_stable(Fk, act, S4));
    CHECK(check_admissible(Dg, Fk, SubmoduleMode::exact, 1).admissible);
    REQUIRE(rk.seed_intersection);
    CHECK(*rk.seed_intersection <= 1);
  }
}

TEST_CASE("decomposition into elementary summands") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  {
    PhiModule D = direct_sum({PhiModule(diag(Q2, {1, 2})), simple_isocrystal(Q2, 1, 2)});
    PMat J = pairing(Q2, 4, {{0, 1}, {2, 3}});
    auto parts = decompose_for_EAdm(D, J, trivial_action(4, Q2));
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].slopes == std::vector<Rational>{Rational(0), Rational(1)});
    CHECK(parts[1].slopes == std::vector<Rational>{Rational(1, 2)});
    CHECK(same_span(parts[0].basis, cols(Q2, 4, {0, 1})));
    CHECK(same_span(parts[1].basis, cols(Q2, 4, {2, 3})));
  }
  {
    auto Q4 = LocalField::unramified(2, 2, 40);
    GroupAction q8 = quaternion_action(Q4);
    auto parts = decompose_for_EAdm(simple_isocrystal(Q4, 1, 2), pairing(Q4, 2, {{0, 1}}), q8);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].basis.cols() == 2);
  }
  {
    // C2 acting by +1 on one supersingular plane and -1 on the other.
    auto Q3 = LocalField::unramified(3, 1, 40);
    PhiModule D = direct_sum({simple_isocrystal(Q3, 1, 2), simple_isocrystal(Q3, 1, 2)});
    PMat J = pairing(Q3, 4, {{0, 1}, {2, 3}});
    GroupAction act = cyclic_action(2, diag(Q3, {1, 1, -1, -1}));
    auto parts = decompose_for_EAdm(D, J, act);
    REQUIRE(parts.size() == 2);
    for (const auto& s : parts) {
      CHECK(s.basis.cols() == 2);
      CHECK(rank(s.gram) == 2);
    }
  }
}

TEST_CASE("pullbacks of admissible filtrations stay admissible") {
  auto K = LocalField::unramified(3, 1, 40);
  std::mt19937_64 g(9);
  int done = 0;
  for (int t = 0; t < 12; ++t) {
    // D = torus^a + diag(1, p) conjugated by a block upper triangular change of basis.
    const int a = 1 + t % 2, n = a + 2;
    std::vector<long> d(a, 3);
    d.push_back(1);
    d.push_back(3);
    QMat P;
    do {
      P = random_qmat(g, n, n);
      P.block(a, 0, 2, a).setZero();
    } while (oracle::rank_ff(P) != n);
    PMat PK = to_field(P, K);
    PhiModule D = PhiModule(diag(K, d)).change_basis(PK);
    PMat T = inverse(PK) * cols(K, n, [&] {
      std::vector<int> v(a);
      std::iota(v.begin(), v.end(), 0);
      return v;
    }());
    SemiAbelianPhiModule Dsa(D, T, pairing(K, 2, {{0, 1}}));
    PMat JB = Dsa.abelian_part().gram();
    auto parts = isoclinic_decompose(Dsa.quotient());
    Filtration FB = two_slope_filtration(Dsa.quotient(), JB, trivial_action(2, K), GaloisSetup::trivial(K), t);
    PMat Q = Dsa.adapted_basis();
    Filtration F{K, hstack(PMat(Q.leftCols(a)), PMat(Q.rightCols(2) * FB.basis))};
    CHECK(is_admissible(D, F, SubmoduleMode::sampled, t, 30).admissible);
    ++done;
  }
  CHECK(done == 12);
}

TEST_CASE("gluing solutions on orthogonal summands") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  // Both blocks have multiplier -2.
  PhiModule D = direct_sum({PhiModule(diag(Q2, {-1, 2})), simple_isocrystal(Q2, 1, 2)});
  PMat J = pairing(Q2, 4, {{0, 1}, {2, 3}});
  GaloisSetup S = GaloisSetup::trivial(Q2);
  auto parts = decompose_for_EAdm(D, J, trivial_action(4, Q2));
  REQUIRE(parts.size() == 2);
  Filtration F1 = two_slope_filtration(parts[0].module, parts[0].gram, parts[0].action, S, 1);
  Filtration F2 = supersingular_filtration(parts[1].module, parts[1].gram, parts[1].action, S, 2);
  Filtration F{Q2, hstack(PMat(parts[0].basis * F1.basis), PMat(parts[1].basis * F2.basis))};
  SemiAbelianPhiModule Dsa(D, PMat::Constant(4, 0, Padic::exact_zero(Q2)), J);
  auto v = verify_EAdm(Dsa, trivial_action(4, Q2), S, F, SubmoduleMode::exact, 0);
  CHECK(v.ok());
}

TEST_CASE("EAdm driver on the fixture matrix") {
  auto Q2 = LocalField::unramified(2, 1, 64);
  auto L = sqrt2_over(Q2);
  GaloisSetup S2 = cyclic_setup(L, 2, "conj");
  GaloisSetup S1 = GaloisSetup::trivial(Q2);

  SUBCASE("torus only") {
    PhiModule D(diag(Q2, {2, 2}));
    SemiAbelianPhiModule Dsa(D, identity(2, Q2), PMat(0, 0));
    GroupAction minus = cyclic_action(2, scalar_matrix(2, Padic(Q2, Rational(-1))));
    auto res = find_admissible_stable_filtration(Dsa, minus, S2, 1);
    CHECK(res.verification.ok());
    CHECK(res.F.dim() == 2);
  }
  SUBCASE("ordinary plus torus") {
    PhiModule D(diag(Q2, {1, 2, 2}));
    SemiAbelianPhiModule Dsa(D, cols(Q2, 3, {2}), pairing(Q2, 2, {{0, 1}}));
    auto res = find_admissible_stable_filtration(Dsa, trivial_action(3, Q2), S1, 2);
    CHECK(res.verification.ok());
    CHECK(res.F.dim() == 2);
    CHECK(contains(res.F.basis, cols(Q2, 3, {2})));
    GroupAction minus = cyclic_action(2, scalar_matrix(3, Padic(Q2, Rational(-1))));
    auto res2 = find_admissible_stable_filtration(Dsa, minus, S2, 3);
    CHECK(res2.verification.ok());
  }
  SUBCASE("supersingular with signs") {
    for (int g : {1, 2}) {
      std::vector<PhiModule> parts(g, simple_isocrystal(Q2, 1, 2));
      std::vector<std::pair<int, int>> pr;
      for (int i = 0; i < g; ++i) pr.push_back({2 * i, 2 * i + 1});
      SemiAbelianPhiModule Dsa(direct_sum(parts), PMat::Constant(2 * g, 0, Padic::exact_zero(Q2)),
                               pairing(Q2, 2 * g, pr));
      GroupAction minus = cyclic_action(2, scalar_matrix(2 * g, Padic(Q2, Rational(-1))));
      auto res = find_admissible_stable_filtration(Dsa, minus, S2, 4 + g, SubmoduleMode::sampled, 60);
      CHECK(res.verification.ok());
      CHECK(res.pieces.at(0).method == "supersingular-homothety");
    }
  }
  SUBCASE("supersingular with the k action") {
    auto Q4 = LocalField::unramified(2, 2, 64);
    auto M = c4_over(Q4);
    GaloisSetup S4 = cyclic_setup(M, 4, "tau");
    PMat k = quaternion_action(Q4)(quaternion_group().index_of("k"));
    for (int g : {1, 2}) {
      std::vector<PhiModule> parts(g, simple_isocrystal(Q4, 1, 2));
      std::vector<PMat> ks(g, k);
      std::vector<std::pair<int, int>> pr;
      for (int i = 0; i < g; ++i) pr.push_back({2 * i, 2 * i + 1});
      SemiAbelianPhiModule Dsa(direct_sum(parts), PMat::Constant(2 * g, 0, Padic::exact_zero(Q4)),
                               pairing(Q4, 2 * g, pr));
      auto res = find_admissible_stable_filtration(Dsa, cyclic_action(4, block_diagonal(ks)), S4, 8 + g,
                                                   SubmoduleMode::sampled, 60);
      CHECK(res.verification.ok());
      CHECK(res.pieces.at(0).method == "supersingular-perturbateur");
    }
  }
}

TEST_CASE("verification names the broken property") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  PhiModule D(diag(Q2, {1, 2, 2}));
  SemiAbelianPhiModule Dsa(D, cols(Q2, 3, {2}), pairing(Q2, 2, {{0, 1}}));
  GaloisSetup S = GaloisSetup::trivial(Q2);
  auto res = find_admissible_stable_filtration(Dsa, trivial_action(3, Q2), S, 2);
  Filtration bad{Q2, cols(Q2, 3, {0, 2})};
  auto v = verify_EAdm(Dsa, trivial_action(3, Q2), S, bad, SubmoduleMode::exact, 0);
  CHECK_FALSE(v.ok());
  CHECK(v.failure() == "admissibility");
  PMat e12 = cols(Q2, 3, {0});
  e12(1, 0) = Q2->one();
  Filtration small{Q2, e12};
  CHECK(verify_EAdm(Dsa, trivial_action(3, Q2), S, small, SubmoduleMode::exact, 0).failure() == "torus-containment");
}
