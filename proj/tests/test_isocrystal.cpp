#include <random>

#include "doctest.h"
#include "isocrys/isocrystal.hpp"
#include "oracles.hpp"

using namespace isocrys;

namespace {

QMat qmat(std::initializer_list<std::initializer_list<long>> rows) {
  QMat M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long v : r) M(i, j++) = Rational(v);
    ++i;
  }
  return M;
}

Rational R(long a, long b = 1) { return Rational(Integer(a), Integer(b)); }

QMat random_invertible_module(std::mt19937_64& g, int n, long p) {
  std::uniform_int_distribution<long> d(-4, 4), e(0, 2);
  for (;;) {
    QMat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Integer pp = ipow(p, static_cast<unsigned long>(e(g)));
        A(i, j) = Rational(Integer(Integer(d(g)) * pp));
      }
    if (!oracle::charpoly(A)[0].is_zero()) return A;
  }
}

PMat random_kq_matrix(std::mt19937_64& g, const FieldPtr& K, int n) {
  std::uniform_int_distribution<long> d(-3, 3);
  for (;;) {
    PMat P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        BaseCoords c;
        for (int t = 0; t < K->f(); ++t) c.push_back(Rational(d(g)));
        P(i, j) = Padic::from_coords(K, {c});
      }
    if (rank(P) == n) return P;
  }
}

std::vector<Rational> oracle_slopes(const QMat& A, int f, long p) {
  QMat B = matrix_power(A, f);
  auto v = oracle::root_valuations(oracle::charpoly(B), p);
  for (auto& x : v) x /= Rational(f);
  return v;
}

}  // namespace

TEST_CASE("t_N and slopes on small examples") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  PhiModule S(Q2, qmat({{0, 2}, {1, 0}}));
  CHECK(t_N(S) == R(1));
  auto sp = newton_slopes(S);
  REQUIRE(sp.slopes.size() == 1);
  CHECK(sp.slopes[0] == std::make_pair(R(1, 2), 2));

  auto Q3 = LocalField::unramified(3, 1, 40);
  PhiModule I(Q3, qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(t_N(I) == R(0));
  CHECK(newton_slopes(I).slopes == std::vector<std::pair<Rational, int>>{{R(0), 3}});

  PhiModule D(Q3, qmat({{1, 0, 0}, {0, 3, 0}, {0, 0, 3}}));
  CHECK(t_N(D) == R(2));
  PhiModule E(Q3, qmat({{1, 0}, {0, 3}}));
  CHECK(newton_slopes(E).slopes == std::vector<std::pair<Rational, int>>{{R(0), 1}, {R(1), 1}});
}

TEST_CASE("simple isocrystals have the expected slope") {
  for (long p : {2L, 3L}) {
    auto K = LocalField::unramified(p, 2, 40);
    for (long r = 1; r <= 4; ++r)
      for (long s = -2; s <= 5; ++s) {
        PhiModule S = simple_isocrystal(K, s, r);
        auto sp = newton_slopes(S);
        REQUIRE(sp.slopes.size() == 1);
        CHECK(sp.slopes[0].first == R(s, r));
        CHECK(sp.slopes[0].second == r);
      }
  }
}

TEST_CASE("slopes agree with the exact rational Newton polygon") {
  std::mt19937_64 g(2024);
  int checked = 0;
  for (long p : {2L, 3L, 5L})
    for (int f = 1; f <= 3; ++f) {
      auto K = LocalField::unramified(p, f, 80);
      for (int t = 0; t < 24; ++t) {
        int n = 1 + t % 6;
        QMat A = random_invertible_module(g, n, p);
        PhiModule D(K, A);
        auto got = newton_slopes(D);
        CHECK(got.multiset() == oracle_slopes(A, f, p));
        CHECK(got.total() == t_N(D));
        CHECK(got.dim() == n);
        ++checked;
      }
    }
  CHECK(checked >= 200);
}

TEST_CASE("slope profile is invariant under sigma-twisted change of basis") {
  std::mt19937_64 g(77);
  for (long p : {2L, 3L})
    for (int f = 1; f <= 3; ++f) {
      auto K = LocalField::unramified(p, f, 80);
      for (int t = 0; t < 6; ++t) {
        int n = 2 + t % 4;
        QMat A = random_invertible_module(g, n, p);
        PhiModule D(K, A);
        PMat P = random_kq_matrix(g, K, n);
        PhiModule E = D.change_basis(P);
        CHECK(newton_slopes(E) == newton_slopes(D));
        CHECK(t_N(E) == t_N(D));
      }
    }
}

TEST_CASE("t_N is additive and slopes of a direct sum are the union") {
  std::mt19937_64 g(8);
  auto K = LocalField::unramified(3, 2, 60);
  for (int t = 0; t < 10; ++t) {
    PhiModule a(K, random_invertible_module(g, 1 + t % 3, 3));
    PhiModule b(K, random_invertible_module(g, 1 + (t / 3) % 3, 3));
    PhiModule s = direct_sum({a, b});
    CHECK(t_N(s) == t_N(a) + t_N(b));
    auto ms = newton_slopes(s).multiset();
    auto ma = newton_slopes(a).multiset(), mb = newton_slopes(b).multiset();
    ma.insert(ma.end(), mb.begin(), mb.end());
    std::sort(ma.begin(), ma.end());
    CHECK(ms == ma);
  }
}

TEST_CASE("isoclinic decomposition") {
  auto Q2 = LocalField::unramified(2, 1, 60);
  PhiModule D(Q2, qmat({{1, 0}, {0, 2}}));
  auto parts = isoclinic_decompose(D);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].slope == R(0));
  CHECK(parts[1].slope == R(1));
  CHECK(same_span(parts[0].basis, PMat(to_field(qmat({{1}, {0}}), Q2))));
  CHECK(same_span(parts[1].basis, PMat(to_field(qmat({{0}, {1}}), Q2))));

  PhiModule M(Q2, qmat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 2}, {0, 0, 1, 0}}));
  parts = isoclinic_decompose(M);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].slope == R(0));
  CHECK(parts[1].slope == R(1, 2));
  CHECK(same_span(parts[0].basis, PMat(to_field(qmat({{1, 0}, {0, 1}, {0, 0}, {0, 0}}), Q2))));
  CHECK(same_span(parts[1].basis, PMat(to_field(qmat({{0, 0}, {0, 0}, {1, 0}, {0, 1}}), Q2))));

  std::mt19937_64 g(5);
  for (long p : {2L, 3L})
    for (int f = 1; f <= 2; ++f) {
      auto K = LocalField::unramified(p, f, 80);
      for (int t = 0; t < 12; ++t) {
        int n = 2 + t % 4;
        PhiModule X(K, random_invertible_module(g, n, p));
        auto ps = isoclinic_decompose(X);
        PMat all(n, 0);
        auto prof = newton_slopes(X);
        REQUIRE(ps.size() == prof.slopes.size());
        for (size_t k = 0; k < ps.size(); ++k) {
          CHECK(ps[k].basis.cols() == prof.slopes[k].second);
          PhiModule Y = X.restrict(ps[k].basis);
          auto sy = newton_slopes(Y);
          REQUIRE(sy.slopes.size() == 1);
          CHECK(sy.slopes[0].first == ps[k].slope);
          all = hstack(all, ps[k].basis);
        }
        CHECK(rank(all) == n);
      }
    }
}

TEST_CASE("duality") {
  std::mt19937_64 g(41);
  auto K = LocalField::unramified(2, 2, 60);
  for (int t = 0; t < 10; ++t) {
    int n = 1 + t % 4;
    PhiModule D(K, random_invertible_module(g, n, 2));
    for (int tw : {0, 1}) {
      PhiModule Dv = dual(D, tw);
      // <phi f, phi x> = p^tw sigma(<f, x>) on basis vectors.
      PMat pairing = Dv.matrix().transpose() * D.matrix();
      PMat target = scalar_matrix(n, Padic(K, Rational(tw ? 2 : 1)));
      CHECK(is_zero(PMat(pairing - target)));
      auto a = newton_slopes(D).multiset();
      auto b = newton_slopes(Dv).multiset();
      std::vector<Rational> expect;
      for (auto& x : a) expect.push_back(Rational(tw) - x);
      std::sort(expect.begin(), expect.end());
      CHECK(b == expect);
    }
    PhiModule DD = dual(dual(D, 1), 1);
    CHECK(is_zero(PMat(DD.matrix() - D.matrix())));
  }
  auto Q2 = LocalField::unramified(2, 1, 40);
  PhiModule E(Q2, qmat({{1, 0}, {0, 2}}));
  CHECK(newton_slopes(dual(E, 1)).multiset() == std::vector<Rational>{R(0), R(1)});
}

TEST_CASE("endomorphism algebras of the slope one half module") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  auto Q4 = LocalField::unramified(2, 2, 40);
  PhiModule S2(Q2, qmat({{0, 2}, {1, 0}}));
  PhiModule S4(Q4, qmat({{0, 2}, {1, 0}}));
  auto E2 = endomorphism_basis(S2);
  auto E4 = endomorphism_basis(S4);
  CHECK(E2.size() == 2);
  CHECK(E4.size() == 4);
  for (const auto& U : E4) CHECK(is_zero(PMat(U * S4.matrix() - S4.matrix() * frobenius(U))));
  // Non-commutative over Q_4: some pair fails to commute.
  bool noncomm = false;
  for (const auto& U : E4)
    for (const auto& V : E4) noncomm = noncomm || !is_zero(PMat(U * V - V * U));
  CHECK(noncomm);
}

TEST_CASE("submodules") {
  auto Q2 = LocalField::unramified(2, 1, 60);
  PhiModule D(Q2, qmat({{1, 0}, {0, 2}}));
  auto subs = submodules(D, SubmoduleMode::exact);
  CHECK(subs.size() == 4);
  PhiModule S(Q2, qmat({{0, 2}, {1, 0}}));
  CHECK(submodules(S, SubmoduleMode::exact).size() == 2);

  PhiModule SS = direct_sum({S, S});
  CHECK_THROWS_AS(submodules(SS, SubmoduleMode::exact), MultiplicityError);
  auto sampled = submodules(SS, SubmoduleMode::sampled, 50, 7);
  CHECK(sampled.size() == 52);
  auto full = newton_slopes(SS).multiset();
  for (const auto& W : sampled) {
    CHECK(SS.is_stable(W));
    if (W.cols() == 0) continue;
    auto sub = newton_slopes(SS.restrict(W)).multiset();
    CHECK(std::includes(full.begin(), full.end(), sub.begin(), sub.end()));
  }
  int proper = 0;
  for (size_t i = 2; i < sampled.size(); ++i) proper += sampled[i].cols() == 2;
  CHECK(proper == 50);
  auto again = submodules(SS, SubmoduleMode::sampled, 50, 7);
  for (size_t i = 0; i < again.size(); ++i) CHECK(same_span(again[i], sampled[i]));

  std::mt19937_64 g(3);
  auto K = LocalField::unramified(3, 1, 60);
  for (int t = 0; t < 6; ++t) {
    PhiModule X(K, random_invertible_module(g, 3, 3));
    std::vector<Rational> full_x = newton_slopes(X).multiset();
    std::vector<PMat> xs;
    try {
      xs = submodules(X, SubmoduleMode::exact);
    } catch (const MultiplicityError&) {
      continue;
    }
    for (const auto& W : xs) {
      if (W.cols() == 0) continue;
      auto sub = newton_slopes(X.restrict(W)).multiset();
      CHECK(std::includes(full_x.begin(), full_x.end(), sub.begin(), sub.end()));
    }
  }
}

TEST_CASE("ensure_split passes to a level where the twisted slope zero plane splits") {
  auto Q3 = LocalField::unramified(3, 1, 40);
  PhiModule D(Q3, qmat({{0, 1}, {1, 0}}));
  CHECK_FALSE(is_split(D));
  PhiModule E = ensure_split(D);
  CHECK(E.field()->f() == 2);
  CHECK(newton_slopes(E) == newton_slopes(D));
  auto subs = submodules(E, SubmoduleMode::sampled, 5, 1);
  for (const auto& W : subs) CHECK(E.is_stable(W));
}

TEST_CASE("base change embeds the smaller unramified level") {
  auto K2 = LocalField::unramified(2, 2, 40);
  std::mt19937_64 g(9);
  PMat P = random_kq_matrix(g, K2, 3);
  PhiModule D = PhiModule(K2, random_invertible_module(g, 3, 2)).change_basis(P);
  PhiModule E = base_change(D, 4);
  CHECK(E.field()->f() == 4);
  CHECK(newton_slopes(E) == newton_slopes(D));
}

TEST_CASE("polarizations") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  PhiModule S(Q2, qmat({{0, 2}, {1, 0}}));
  PolarizedPhiModule P(S, to_field(qmat({{0, -1}, {1, 0}}), Q2));
  CHECK(P.multiplier() == Padic(Q2, Rational(-2)));
  CHECK_THROWS_AS(PolarizedPhiModule(S, to_field(qmat({{0, 1}, {1, 0}}), Q2)), ValidationError);
  PhiModule I(Q2, qmat({{1, 0}, {0, 1}}));
  CHECK_THROWS_AS(PolarizedPhiModule(I, to_field(qmat({{0, 1}, {-1, 0}}), Q2)), ValidationError);

  // Transport of block polarizations along random changes of basis.
  std::mt19937_64 g(12);
  for (long p : {2L, 3L}) {
    auto K = LocalField::unramified(p, 2, 60);
    for (int t = 0; t < 6; ++t) {
      std::vector<PMat> blocks, grams;
      int gg = 1 + t % 3;
      for (int b = 0; b < gg; ++b) {
        bool ordinary = (g() % 2) == 0;
        blocks.push_back(to_field(ordinary ? qmat({{1, 0}, {0, p}}) : qmat({{0, -p}, {1, 0}}), K));
        grams.push_back(to_field(qmat({{0, 1}, {-1, 0}}), K));
      }
      PMat A0 = block_diagonal(blocks), J0 = block_diagonal(grams);
      PMat Pm = random_kq_matrix(g, K, 2 * gg);
      PhiModule D = PhiModule(A0).change_basis(Pm);
      PMat J = Pm.transpose() * J0 * Pm;
      PolarizedPhiModule X(D, J);
      CHECK(X.multiplier() == Padic(K, Rational(p)));
      auto ms = newton_slopes(D).multiset();
      std::vector<Rational> flipped;
      for (auto& m : ms) flipped.push_back(Rational(1) - m);
      std::sort(flipped.begin(), flipped.end());
      CHECK(flipped == ms);
    }
  }
}

TEST_CASE("semi-abelian structure") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  PhiModule D(Q2, qmat({{1, 0, 0}, {0, 2, 0}, {0, 0, 2}}));
  SemiAbelianPhiModule X(D, to_field(qmat({{0}, {0}, {1}}), Q2), to_field(qmat({{0, 1}, {-1, 0}}), Q2));
  CHECK(X.toric_rank() == 1);
  CHECK(X.abelian_part().genus() == 1);
  CHECK_THROWS_AS(SemiAbelianPhiModule(D, to_field(qmat({{1}, {0}, {0}}), Q2), to_field(qmat({{0, 1}, {-1, 0}}), Q2)),
                  ValidationError);
  // A non-split extension of the ordinary plane by a torus.
  PhiModule N(Q2, qmat({{2, 0, 1}, {0, 1, 0}, {0, 0, 2}}));
  SemiAbelianPhiModule Y(N, to_field(qmat({{1}, {0}, {0}}), Q2), to_field(qmat({{0, 1}, {-1, 0}}), Q2));
  CHECK(newton_slopes(Y.quotient()).multiset() == std::vector<Rational>{R(0), R(1)});
  PhiModule T(Q2, qmat({{2, 0}, {0, 2}}));
  SemiAbelianPhiModule Z(T, to_field(qmat({{1, 0}, {0, 1}}), Q2), PMat(0, 0));
  CHECK_FALSE(Z.has_abelian_part());
}
