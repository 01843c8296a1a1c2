#include "isocrys/isocrystal.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace isocrys {

namespace {

Padic p_power(const FieldPtr& K, long s) {
  Rational p(K->p());
  Rational r(1);
  for (long i = 0; i < (s < 0 ? -s : s); ++i) r *= p;
  if (s < 0) r = Rational(1) / r;
  return Padic(K, r);
}

std::vector<Padic> coords(const Padic& x, const FieldPtr& K) { return x.realize(K).base_coordinates(); }

using Poly = std::vector<Padic>;

Poly poly_mul(const Poly& a, const Poly& b, const FieldPtr& K) {
  Poly out(a.size() + b.size() - 1, Padic::exact_zero(K));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

PMat evaluate(const Poly& h, const PMat& T, const FieldPtr& K) {
  const int n = static_cast<int>(T.rows());
  PMat M = scalar_matrix(n, h.back().realize(K));
  for (int i = static_cast<int>(h.size()) - 2; i >= 0; --i) {
    M = (M * T).eval();
    for (int d = 0; d < n; ++d) M(d, d) += h[i];
  }
  return M;
}

// Splits the characteristic polynomial of T into the factor carrying the d
// roots of positive valuation and the factor carrying the rest.
std::pair<Poly, Poly> slope_split(const Poly& cp, int d, const FieldPtr& K) {
  const int n = static_cast<int>(cp.size()) - 1;
  if (cp[d].is_zero()) throw PrecisionFailure("Newton polygon vertex vanished at working precision");
  Padic lead = cp[d].inverse();
  Poly P(cp.size());
  for (int i = 0; i <= n; ++i) {
    P[i] = cp[i] * lead;
    if (i != d && !P[i].is_zero() && P[i].valuation_units() <= 0)
      throw PrecisionFailure("slope factorization: coefficient does not lie above the polygon");
  }
  Poly h(d + 1, Padic::exact_zero(K)), g(n - d + 1, Padic::exact_zero(K));
  h[d] = K->one();
  g[0] = K->one();
  const int limit = 4 * (K->precision() + 16) + 16;
  for (int it = 0;; ++it) {
    if (it > limit) throw PrecisionFailure("slope factorization did not converge");
    Poly prod = poly_mul(h, g, K);
    bool done = true;
    for (int i = 0; i <= n; ++i) {
      Padic err = P[i] - prod[i];
      if (err.is_zero()) continue;
      done = false;
      if (i < d)
        h[i] += err;
      else
        g[i - d] += err;
    }
    if (done) break;
  }
  return {h, g};
}

}  // namespace

// ---------------------------------------------------------------- PhiModule

PhiModule::PhiModule(PMat A, int guard) : A_(std::move(A)) {
  if (A_.rows() != A_.cols()) throw ValidationError("Frobenius matrix must be square");
  if (A_.rows() == 0) throw ValidationError("phi-module of dimension 0");
  K_ = field_of(A_);
  if (!K_) throw ValidationError("Frobenius matrix has no field");
  if (!K_->is_unramified()) throw ValidationError("phi-modules live over an unramified level");
  A_ = realize(A_, K_);
  RankCertificate rc = certified_rank(A_, guard);
  if (rc.rank != dim()) {
    if (rc.zero_floor)
      throw PrecisionFailure("Frobenius matrix is singular to O(p^" + rc.zero_floor->str() + ")");
    throw ValidationError("Frobenius matrix is not invertible");
  }
}

PhiModule::PhiModule(const FieldPtr& K, const QMat& A, int guard) : PhiModule(to_field(A, K), guard) {}

PMat PhiModule::linearization() const {
  PMat B = A_;
  for (int i = 1; i < K_->f(); ++i) B = (B * frobenius_power(A_, i)).eval();
  return B;
}

PhiModule PhiModule::change_basis(const PMat& P) const { return PhiModule(PMat(inverse(P) * A_ * frobenius(P))); }

bool PhiModule::is_stable(const PMat& W, int guard) const {
  if (W.cols() == 0) return true;
  return contains(W, PMat(apply(W)), guard);
}

PhiModule PhiModule::restrict(const PMat& W, int guard) const {
  if (!is_stable(W, guard)) throw ValidationError("subspace is not phi-stable");
  return PhiModule(PMat(left_inverse(W, guard) * apply(W)));
}

PhiModule direct_sum(const std::vector<PhiModule>& parts) {
  std::vector<PMat> blocks;
  for (const auto& d : parts) {
    if (!blocks.empty() && !d.field()->same_tower(*parts.front().field()))
      throw ValidationError("direct sum of modules over different fields");
    blocks.push_back(d.matrix());
  }
  PMat A = block_diagonal(blocks);
  return PhiModule(realize(A, parts.front().field()));
}

PhiModule base_change(const PhiModule& D, int f_new) {
  const FieldPtr& K = D.field();
  if (f_new % K->f() != 0) throw FieldIncompatibility("target level must be a multiple of f");
  if (f_new == K->f()) return D;
  FieldPtr K2 = LocalField::unramified(K->p(), f_new, K->precision());
  return PhiModule(lift_unramified(D.matrix(), K2));
}

PhiModule simple_isocrystal(const FieldPtr& K, long s, long r) {
  if (r < 1) throw ValidationError("simple isocrystal needs r >= 1");
  PMat A = PMat::Constant(r, r, Padic::exact_zero(K));
  for (long i = 0; i + 1 < r; ++i) A(i + 1, i) = K->one();
  A(0, r - 1) = p_power(K, s);
  return PhiModule(A);
}

PhiModule dual(const PhiModule& D, int twist) {
  PMat Ai = inverse(D.matrix());
  PMat At = Ai.transpose();
  return PhiModule(PMat(At * p_power(D.field(), twist)));
}

Rational t_N(const PhiModule& D) {
  Padic d = determinant(D.matrix());
  if (d.is_zero()) throw PrecisionFailure("determinant indistinguishable from zero");
  return d.valuation();
}

// ---------------------------------------------------------------- slopes

int SlopeProfile::dim() const {
  int n = 0;
  for (const auto& s : slopes) n += s.second;
  return n;
}

Rational SlopeProfile::total() const {
  Rational t(0);
  for (const auto& s : slopes) t += s.first * Rational(s.second);
  return t;
}

std::vector<Rational> SlopeProfile::multiset() const {
  std::vector<Rational> out;
  for (const auto& s : slopes)
    for (int i = 0; i < s.second; ++i) out.push_back(s.first);
  return out;
}

SlopeProfile newton_polygon(const std::vector<NewtonPoint>& pts, int scale) {
  std::vector<NewtonPoint> ex;
  int hi = -1;
  for (const auto& q : pts)
    if (q.exact) ex.push_back(q);
  std::sort(ex.begin(), ex.end(), [](const NewtonPoint& a, const NewtonPoint& b) { return a.i < b.i; });
  for (const auto& q : pts) hi = std::max(hi, q.i);
  if (ex.empty() || ex.front().i != 0) throw PrecisionFailure("constant coefficient not certified nonzero");
  if (ex.back().i != hi) throw PrecisionFailure("leading coefficient not certified nonzero");
  // Lower hull.
  std::vector<NewtonPoint> hull;
  for (const auto& q : ex) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // b is removed if it lies on or above the segment a-q.
      Rational lhs = (b.v - a.v) * Rational(q.i - a.i);
      Rational rhs = (q.v - a.v) * Rational(b.i - a.i);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(q);
  }
  auto hull_at = [&](int i) {
    for (size_t k = 0; k + 1 < hull.size(); ++k)
      if (hull[k].i <= i && i <= hull[k + 1].i)
        return hull[k].v + (hull[k + 1].v - hull[k].v) * Rational(i - hull[k].i) / Rational(hull[k + 1].i - hull[k].i);
    return hull.back().v;
  };
  for (const auto& q : pts)
    if (!q.exact && q.v < hull_at(q.i))
      throw PrecisionFailure("Newton polygon vertex is ambiguous at working precision");
  std::map<Rational, int> m;
  SlopeProfile prof;
  const Rational sc(scale);
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    int len = hull[k + 1].i - hull[k].i;
    Rational root = -(hull[k + 1].v - hull[k].v) / Rational(len) / sc;
    m[root] += len;
  }
  for (const auto& h : hull) prof.vertices.emplace_back(h.i, h.v / sc);
  prof.slopes.assign(m.begin(), m.end());
  return prof;
}

namespace {

std::vector<NewtonPoint> points_of(const std::vector<Padic>& cp) {
  std::vector<NewtonPoint> pts;
  for (size_t i = 0; i < cp.size(); ++i) {
    const Padic& c = cp[i];
    if (c.is_exact_zero()) continue;
    if (c.is_constant()) {
      pts.push_back({static_cast<int>(i), Rational(0), true});  // only the leading 1
      continue;
    }
    if (c.is_zero())
      pts.push_back({static_cast<int>(i), c.abs_precision(), false});
    else
      pts.push_back({static_cast<int>(i), c.valuation(), true});
  }
  return pts;
}

}  // namespace

SlopeProfile newton_slopes(const PhiModule& D) {
  auto cp = charpoly(D.linearization());
  return newton_polygon(points_of(cp), D.field()->f());
}

namespace {

// The fraction of least denominator strictly between a < b; small
// denominators keep the matrix powers below short.
Rational simplest_between(const Rational& a, const Rational& b) {
  for (long r = 1;; ++r) {
    Rational k = floor(a * Rational(r)) + Rational(1);
    if (k / Rational(r) < b) return k / Rational(r);
  }
}

}  // namespace

std::vector<IsoclinicPart> isoclinic_decompose(const PhiModule& D, int guard) {
  const FieldPtr& K = D.field();
  const int n = D.dim();
  SlopeProfile prof = newton_slopes(D);
  const auto& sl = prof.slopes;
  if (sl.size() == 1) return {{sl[0].first, identity(n, K)}};
  PMat B = D.linearization();
  const Rational f(K->f());
  std::vector<PMat> above, below;  // per boundary
  int d_plus = n;
  for (size_t k = 0; k + 1 < sl.size(); ++k) {
    d_plus -= sl[k].second;
    Rational mid = simplest_between(sl[k].first * f, sl[k + 1].first * f);
    long s = mid.num().get_si(), r = mid.den().get_si();
    PMat T = matrix_power(B, r);
    T = (T * p_power(K, -s)).eval();
    auto cp = charpoly(T);
    auto [h, g] = slope_split(cp, d_plus, K);
    PMat hi = kernel(evaluate(h, T, K), guard);
    PMat lo = kernel(evaluate(g, T, K), guard);
    if (hi.cols() != d_plus || lo.cols() != n - d_plus)
      throw PrecisionFailure("slope factor kernels have the wrong dimension");
    above.push_back(hi);
    below.push_back(lo);
  }
  std::vector<IsoclinicPart> out;
  for (size_t k = 0; k < sl.size(); ++k) {
    PMat W = identity(n, K);
    if (k > 0) W = above[k - 1];
    if (k + 1 < sl.size()) W = (k > 0) ? intersection(W, below[k], guard) : below[k];
    if (W.cols() != sl[k].second) throw PrecisionFailure("isoclinic part has the wrong dimension");
    if (!D.is_stable(W, guard)) throw PrecisionFailure("isoclinic part not certified phi-stable");
    out.push_back({sl[k].first, W});
  }
  return out;
}

// ---------------------------------------------------------------- morphisms

std::vector<PMat> hom_basis(const PhiModule& from, const PhiModule& to, int guard) {
  const FieldPtr& K = to.field();
  if (!from.field()->same_tower(*K)) throw ValidationError("hom between modules over different fields");
  FieldPtr Q = K->prime_field();
  const int n = to.dim(), r = from.dim(), f = K->f();
  const int N = n * r * f;
  const PMat& X = from.matrix();
  const PMat& Y = to.matrix();
  std::vector<Padic> xp, sxp;
  for (int j = 0; j < f; ++j) {
    std::vector<Padic> c(f, Padic::exact_zero(Q));
    c[j] = Q->one();
    xp.push_back(Padic::from_base_coordinates(K, c));
    sxp.push_back(xp.back().frobenius());
  }
  PMat L = PMat::Constant(N, N, Padic::exact_zero(Q));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < r; ++b)
      for (int j = 0; j < f; ++j) {
        const int col = (a * r + b) * f + j;
        for (int i = 0; i < n; ++i)
          for (int c = 0; c < r; ++c) {
            Padic v = Padic::exact_zero(K);
            if (i == a) v += xp[j] * X(b, c);
            if (c == b) v -= Y(i, a) * sxp[j];
            if (v.is_exact_zero()) continue;
            auto cs = coords(v, K);
            for (int t = 0; t < f; ++t) L((i * r + c) * f + t, col) = cs[t].realize(Q);
          }
      }
  PMat ker = kernel(L, guard);
  std::vector<PMat> out;
  for (Eigen::Index k = 0; k < ker.cols(); ++k) {
    PMat U(n, r);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < r; ++b) {
        std::vector<Padic> c;
        for (int j = 0; j < f; ++j) c.push_back(ker((a * r + b) * f + j, k).realize(Q));
        U(a, b) = Padic::from_base_coordinates(K, c);
      }
    out.push_back(U);
  }
  return out;
}

std::vector<PMat> endomorphism_basis(const PhiModule& D, int guard) { return hom_basis(D, D, guard); }

// ---------------------------------------------------------------- submodules

namespace {

struct SplitPart {
  Rational slope;
  PMat basis;
  int r = 1;                 // denominator of the slope
  std::vector<PMat> homs;    // images in D of Hom(S, D_mu), when not simple
};

std::vector<SplitPart> split_parts(const PhiModule& D, bool require_split) {
  std::vector<SplitPart> out;
  for (auto& part : isoclinic_decompose(D)) {
    SplitPart sp;
    sp.slope = part.slope;
    sp.basis = part.basis;
    sp.r = static_cast<int>(part.slope.den().get_si());
    if (part.basis.cols() > sp.r) {
      PhiModule Dmu = D.restrict(part.basis);
      PhiModule S = simple_isocrystal(D.field(), part.slope.num().get_si(), sp.r);
      PMat all(D.dim(), 0);
      for (const PMat& U : hom_basis(S, Dmu)) {
        sp.homs.push_back(part.basis * U);
        all = hstack(all, sp.homs.back());
      }
      if (require_split && (all.cols() == 0 || rank(all) != part.basis.cols()))
        throw MultiplicityError("isoclinic part of slope " + part.slope.str() +
                                " has no explicit simple summands at this level; apply ensure_split");
    }
    out.push_back(std::move(sp));
  }
  return out;
}

std::vector<PMat> all_sums(const std::vector<SplitPart>& parts, int n, const FieldPtr& K) {
  std::vector<PMat> out;
  const size_t k = parts.size();
  for (size_t mask = 0; mask < (size_t(1) << k); ++mask) {
    PMat W = PMat::Constant(n, 0, Padic::exact_zero(K));
    for (size_t i = 0; i < k; ++i)
      if (mask & (size_t(1) << i)) W = hstack(W, parts[i].basis);
    out.push_back(W);
  }
  return out;
}

}  // namespace

std::vector<PMat> submodules(const PhiModule& D, SubmoduleMode mode, int budget, std::uint64_t seed) {
  const FieldPtr& K = D.field();
  const int n = D.dim();
  if (mode == SubmoduleMode::exact) {
    std::vector<SplitPart> parts;
    for (auto& part : isoclinic_decompose(D)) {
      long r = part.slope.den().get_si();
      if (part.basis.cols() != r)
        throw MultiplicityError("slope " + part.slope.str() + " occurs with multiplicity " +
                                std::to_string(part.basis.cols() / r) + "; use sampled mode");
      parts.push_back({part.slope, part.basis, static_cast<int>(r), {}});
    }
    return all_sums(parts, n, K);
  }
  auto parts = split_parts(D, true);
  std::vector<PMat> out = all_sums(parts, n, K);
  std::vector<size_t> repeated;
  for (size_t i = 0; i < parts.size(); ++i)
    if (!parts[i].homs.empty()) repeated.push_back(i);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1), small(-3, 3);
  FieldPtr Q = K->prime_field();
  for (int t = 0; t < budget; ++t) {
    PMat W = PMat::Constant(n, 0, Padic::exact_zero(K));
    if (repeated.empty()) {
      for (const auto& p : parts)
        if (coin(rng)) W = hstack(W, p.basis);
      out.push_back(W);
      continue;
    }
    const SplitPart& sp = parts[repeated[rng() % repeated.size()]];
    const int m = static_cast<int>(sp.basis.cols()) / sp.r;
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(m - 1));
    PMat piece;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 20) throw BudgetExhausted("could not draw a proper submodule of the requested rank");
      PMat img = PMat::Constant(n, 0, Padic::exact_zero(K));
      for (int c = 0; c < k; ++c) {
        PMat U = PMat::Constant(n, sp.r, Padic::exact_zero(K));
        for (const PMat& H : sp.homs) {
          int a = small(rng);
          if (a) U = (U + H * Padic(K, Rational(a))).eval();
        }
        img = hstack(img, U);
      }
      if (img.cols() && rank(img) == k * sp.r) {
        piece = column_basis(img);
        break;
      }
    }
    for (const auto& p : parts) {
      if (&p == &sp)
        W = hstack(W, piece);
      else if (coin(rng))
        W = hstack(W, p.basis);
    }
    if (!D.is_stable(W)) throw InternalContradiction("sampled submodule is not phi-stable");
    out.push_back(W);
  }
  return out;
}

bool is_split(const PhiModule& D) {
  try {
    split_parts(D, true);
    return true;
  } catch (const MultiplicityError&) {
    return false;
  }
}

PhiModule ensure_split(const PhiModule& D, int max_factor) {
  for (int k = 1; k <= max_factor; ++k) {
    PhiModule E = base_change(D, D.field()->f() * k);
    if (is_split(E)) return E;
  }
  throw MultiplicityError("no unramified level up to degree " + std::to_string(D.field()->f() * max_factor) +
                          " splits the isoclinic parts into standard simple summands");
}

// ---------------------------------------------------------------- polarizations

PolarizedPhiModule::PolarizedPhiModule(PhiModule D, PMat J, int guard) : D_(std::move(D)), J_(std::move(J)) {
  const int n = D_.dim();
  if (n % 2) throw ValidationError("polarized module must have even dimension");
  if (J_.rows() != n || J_.cols() != n) throw ValidationError("Gram matrix has the wrong size");
  const FieldPtr& K = D_.field();
  J_ = realize(J_, K);
  if (!is_zero(PMat(J_ + J_.transpose()))) throw ValidationError("Gram matrix is not alternating");
  for (int i = 0; i < n; ++i)
    if (!J_(i, i).is_zero()) throw ValidationError("Gram matrix is not alternating");
  if (certified_rank(J_, guard).rank != n) throw ValidationError("Gram matrix is degenerate");
  const PMat& A = D_.matrix();
  PMat lhs = A.transpose() * J_ * A;
  PMat sJ = frobenius(J_);
  int bi = -1, bj = -1;
  std::int64_t best = kExact;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!sJ(i, j).is_zero() && sJ(i, j).valuation_units() < best) {
        best = sJ(i, j).valuation_units();
        bi = i;
        bj = j;
      }
  c_ = lhs(bi, bj) / sJ(bi, bj);
  if (!is_zero(PMat(lhs - sJ * c_))) throw ValidationError("Gram matrix is not compatible with Frobenius");
  if (c_.is_zero() || c_.valuation() != Rational(1))
    throw ValidationError("polarization multiplier must have valuation 1");
}

SemiAbelianPhiModule::SemiAbelianPhiModule(PhiModule D, PMat toric, PMat gram_B, std::optional<PMat> lambda_T,
                                           int guard)
    : D_(std::move(D)), T_(std::move(toric)) {
  const FieldPtr& K = D_.field();
  const int n = D_.dim();
  const int t = static_cast<int>(T_.cols());
  if (T_.rows() != n) throw ValidationError("toric basis has the wrong length");
  T_ = realize(T_, K);
  if (t > 0) {
    if (rank(T_, guard) != t) throw ValidationError("toric basis is not independent");
    PhiModule DT = D_.restrict(T_, guard);
    SlopeProfile sp = newton_slopes(DT);
    if (sp.slopes.size() != 1 || sp.slopes[0].first != Rational(1))
      throw ValidationError("toric part is not pure of slope 1");
  }
  PMat C = t > 0 ? realize(complement(T_, n, guard), K) : identity(n, K);
  Q_ = hstack(T_, C);
  if (n - t > 0) {
    PMat A2 = inverse(Q_, guard) * D_.matrix() * frobenius(Q_);
    if (t > 0 && !is_zero(PMat(A2.block(t, 0, n - t, t)))) throw InternalContradiction("toric part not stable");
    quotient_ = PhiModule(PMat(A2.block(t, t, n - t, n - t)), guard);
    B_.emplace(quotient_, gram_B, guard);
  } else if (gram_B.size() != 0) {
    throw ValidationError("abelian polarization given for a purely toric module");
  }
  lambda_T_ = lambda_T ? realize(*lambda_T, K) : identity(t, K);
  if (lambda_T_.rows() != t || lambda_T_.cols() != t) throw ValidationError("lambda_T has the wrong size");
  if (t > 0 && rank(lambda_T_, guard) != t) throw ValidationError("lambda_T is not invertible");
}

}  // namespace isocrys
