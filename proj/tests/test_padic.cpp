#include <random>

#include "doctest.h"
#include "isocrys/errors.hpp"
#include "isocrys/padic.hpp"

using namespace isocrys;

namespace {

Rational rand_rat(std::mt19937_64& g, long p) {
  std::uniform_int_distribution<long> num(-500, 500), den(1, 60), sh(-3, 3);
  Rational r(Integer(num(g)), Integer(den(g)));
  long s = sh(g);
  for (long i = 0; i < (s < 0 ? -s : s); ++i) r = s < 0 ? r / Rational(p) : r * Rational(p);
  return r;
}

bool same(const Padic& a, const Padic& b) { return (a - b).is_zero(); }

FieldPtr sqrt2_field(const FieldPtr& K) {
  ExtensionSpec s;
  s.eisenstein = {{Rational(-2)}, {Rational(0)}};
  s.automorphisms = {{"id", {{Rational(0)}, {Rational(1)}}}, {"conj", {{Rational(0)}, {Rational(-1)}}}};
  return LocalField::eisenstein(K, s);
}

}  // namespace

TEST_CASE("rational arithmetic embeds faithfully in Q_p") {
  std::mt19937_64 g(7);
  for (long p : {2L, 3L, 5L, 7L}) {
    auto F = LocalField::unramified(p, 1, 40);
    for (int t = 0; t < 300; ++t) {
      Rational a = rand_rat(g, p), b = rand_rat(g, p);
      Padic A(F, a), B(F, b);
      CHECK(same(A + B, Padic(F, a + b)));
      CHECK(same(A * B, Padic(F, a * b)));
      CHECK(same(A - B, Padic(F, a - b)));
      if (!b.is_zero()) CHECK(same(A / B, Padic(F, a / b)));
      if (!a.is_zero()) CHECK(A.valuation() == Rational(valuation(a, p)));
    }
  }
}

TEST_CASE("relative precision is capped and cancellation loses digits") {
  auto F = LocalField::unramified(2, 1, 20);
  Padic one(F, Rational(1));
  CHECK(one.relative_units() == 20);
  Padic near = Padic(F, Rational(1) + Rational(ipow(2, 15)));
  Padic d = near - one;
  CHECK(d.valuation_units() == 15);
  CHECK(d.relative_units() == 5);
  Padic z = Padic(F, Rational(1) + Rational(ipow(2, 30))) - one;
  CHECK(z.is_zero());
  CHECK_FALSE(z.is_exact_zero());
  CHECK(z.abs_precision_units() == 20);
}

TEST_CASE("Teichmuller modulus for Q_4 is x^2+x+1 and Frobenius squares x") {
  auto K = LocalField::unramified(2, 2, 30);
  const auto& m = K->modulus();
  REQUIRE(m.size() == 3);
  CHECK(m[0] == 1);
  CHECK(m[1] == 1);
  CHECK(m[2] == 1);
  Padic x = K->generator();
  CHECK(same(x.frobenius(), x * x));
  CHECK(same(x.frobenius().frobenius(), x));
  CHECK(same(x.pow(3), K->one()));
}

TEST_CASE("Frobenius is a ring automorphism of order f on K_q") {
  std::mt19937_64 g(11);
  for (auto [p, f] : {std::pair{2L, 3}, std::pair{3L, 2}, std::pair{5L, 2}, std::pair{2L, 4}}) {
    auto K = LocalField::unramified(p, f, 25);
    Padic x = K->generator();
    CHECK(same(x.pow(Integer(K->q() - 1).get_si()), K->one()));
    for (int t = 0; t < 20; ++t) {
      BaseCoords a, b;
      for (int j = 0; j < f; ++j) {
        a.push_back(rand_rat(g, p));
        b.push_back(rand_rat(g, p));
      }
      Padic A = Padic::from_coords(K, {a}), B = Padic::from_coords(K, {b});
      CHECK(same((A * B).frobenius(), A.frobenius() * B.frobenius()));
      CHECK(same((A + B).frobenius(), A.frobenius() + B.frobenius()));
      Padic s = A;
      for (int i = 0; i < f; ++i) s = s.frobenius();
      CHECK(same(s, A));
      CHECK(same(A.frobenius_inverse().frobenius(), A));
      if (!A.is_zero()) CHECK(same(A * A.inverse(), K->one()));
    }
  }
}

TEST_CASE("ramified extension Q_2(sqrt 2)") {
  auto K = LocalField::unramified(2, 1, 30);
  auto L = sqrt2_field(K);
  Padic u = L->uniformizer();
  CHECK(u.valuation() == Rational(Integer(1), Integer(2)));
  CHECK(same(u * u, Padic(L, Rational(2))));
  CHECK(same(u * u.inverse(), L->one()));
  Padic a = Padic(L, Rational(3)) + u * Padic(L, Rational(5));
  Padic ai = a.inverse();
  CHECK(same(a * ai, L->one()));
  int conj = L->automorphism_index("conj");
  CHECK(same(L->apply_automorphism(conj, u), -u));
  CHECK(same(L->apply_automorphism(conj, a * a), L->apply_automorphism(conj, a) * L->apply_automorphism(conj, a)));
  auto cs = a.base_coordinates();
  CHECK(same(cs[0], Padic(K, Rational(3))));
  CHECK(same(cs[1], Padic(K, Rational(5))));
  CHECK(same(Padic::from_base_coordinates(L, cs), a));
  CHECK(same(restrict_to(embed(Padic(K, Rational(7, 3)), L), K), Padic(K, Rational(7, 3))));
}

TEST_CASE("cyclic quartic extension: tau^2 is u -> -u") {
  auto K = LocalField::unramified(2, 2, 30);
  ExtensionSpec s;
  s.eisenstein = {{Rational(2)}, {Rational(0)}, {Rational(-4)}, {Rational(0)}};
  s.automorphisms = {{"t", {{Rational(0)}, {Rational(-3)}, {Rational(0)}, {Rational(1)}}}};
  auto L = LocalField::eisenstein(K, s);
  Padic u = L->uniformizer();
  Padic t1 = L->apply_automorphism(0, u);
  Padic t2 = L->apply_automorphism(0, t1);
  CHECK(same(t2, -u));
  CHECK(same(L->apply_automorphism(0, t2), -t1));
  Padic x = embed(K->generator(), L);
  CHECK(same(L->apply_automorphism(0, x), x));
  Padic v = u * u * u + x;
  CHECK(same(v * v.inverse(), L->one()));
  CHECK(same(u.pow(-3) * u.pow(3), L->one()));
}

TEST_CASE("declared roots of unity are validated") {
  auto K = LocalField::unramified(2, 2, 30);
  ExtensionSpec s;
  s.eisenstein = {{Rational(2)}, {Rational(2)}};
  s.roots_of_unity = {{4, {{Rational(1)}, {Rational(1)}}}};
  auto L = LocalField::eisenstein(K, s);
  Padic i = L->root_of_unity(4);
  CHECK(same(i * i, Padic(L, Rational(-1))));
  CHECK(L->has_root_of_unity(12));
  CHECK_FALSE(L->has_root_of_unity(8));
  CHECK_THROWS_AS(L->root_of_unity(5), FieldIncompatibility);
  ExtensionSpec bad = s;
  bad.roots_of_unity = {{4, {{Rational(1)}, {Rational(0)}}}};
  CHECK_THROWS_AS(LocalField::eisenstein(K, bad), ValidationError);
}

TEST_CASE("square roots in Q_2 and Q_7") {
  auto Q2 = LocalField::unramified(2, 1, 40);
  Padic r = sqrt_unit(Padic(Q2, Rational(-15)));
  CHECK(same(r * r, Padic(Q2, Rational(-15))));
  auto Q7 = LocalField::unramified(7, 1, 40);
  Padic s = sqrt_unit(Padic(Q7, Rational(2)));
  CHECK(same(s * s, Padic(Q7, Rational(2))));
}

TEST_CASE("constants mix with field elements") {
  auto K = LocalField::unramified(3, 2, 20);
  Padic x = K->generator();
  Padic c(Rational(2, 5));
  CHECK(same(c * x, Padic(K, Rational(2, 5)) * x));
  CHECK(same(x + Padic(1) - Padic(1), x));
  CHECK((Padic(0) * x).is_exact_zero());
}
