#include "isocrys/symplectic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>

#include "isocrys/grouprep.hpp"

namespace isocrys {

namespace {

PMat move_to(const PMat& M, const FieldPtr& L) {
  FieldPtr K = field_of(M);
  if (!K || K == L) return realize(M, L);
  if (K->is_unramified() && L->is_unramified())
    return K->f() > L->f() ? restrict_to(M, L) : lift_unramified(M, L);
  if (!K->is_unramified() && L->is_unramified()) return restrict_to(M, L);
  return embed(M, L);
}

PMat column(const PMat& M, Eigen::Index j) { return M.col(j); }

PMat columns(const PMat& M, const std::vector<Eigen::Index>& idx, const FieldPtr& K) {
  PMat out = PMat::Constant(M.rows(), static_cast<Eigen::Index>(idx.size()), Padic::exact_zero(K));
  for (size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = M.col(idx[i]);
  return out;
}

PMat empty_cols(int n, const FieldPtr& K) { return PMat::Constant(n, 0, Padic::exact_zero(K)); }

// Projection onto <x, y>^perp, assuming pair(x, y) = t != 0.
PMat project_off(const SymplecticSpace& V, const PMat& x, const PMat& y, const PMat& W) {
  const Padic t = V.pair(x, y);
  PMat out = W;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    PMat v = column(W, j);
    Padic a = V.pair(v, y) / t;
    Padic b = V.pair(x, v) / t;
    out.col(j) = v - x * a - y * b;
  }
  return out;
}

// Vector in the span of Bv with random small integer coordinates.
PMat random_combination(const PMat& Bv, std::mt19937_64& rng, const FieldPtr& K) {
  std::uniform_int_distribution<long> d(-2, 2);
  PMat v = PMat::Constant(Bv.rows(), 1, Padic::exact_zero(K));
  for (Eigen::Index j = 0; j < Bv.cols(); ++j) {
    long c = d(rng);
    if (c) v += column(Bv, j) * Padic(K, Rational(c));
  }
  return v;
}

}  // namespace

SymplecticSpace::SymplecticSpace(PMat J, int guard) : J_(std::move(J)) {
  const int n = static_cast<int>(J_.rows());
  if (J_.cols() != n || n == 0 || n % 2) throw ValidationError("symplectic form must be square of even size");
  K_ = field_of(J_);
  if (!K_) throw ValidationError("symplectic form has no field");
  J_ = realize(J_, K_);
  for (int i = 0; i < n; ++i) {
    if (!J_(i, i).is_zero()) throw ValidationError("symplectic form is not alternating");
    for (int j = 0; j < i; ++j)
      if (!(J_(i, j) + J_(j, i)).is_zero()) throw ValidationError("symplectic form is not alternating");
  }
  if (certified_rank(J_, guard).rank != n) throw ValidationError("symplectic form is degenerate");
}

SymplecticSpace SymplecticSpace::standard(const FieldPtr& K, int g) {
  PMat J = PMat::Constant(2 * g, 2 * g, Padic::exact_zero(K));
  for (int i = 0; i < g; ++i) {
    J(2 * i, 2 * i + 1) = K->one();
    J(2 * i + 1, 2 * i) = -K->one();
  }
  return SymplecticSpace(J);
}

PMat SymplecticSpace::orthogonal(const PMat& W, int guard) const {
  return kernel(PMat(W.transpose() * J_), guard);
}

SymplecticSpace SymplecticSpace::base_change(const FieldPtr& L) const { return SymplecticSpace(move_to(J_, L)); }

bool is_isotropic(const SymplecticSpace& V, const PMat& B) {
  return B.cols() == 0 || is_zero(PMat(B.transpose() * V.gram() * B));
}

bool is_lagrangian(const SymplecticSpace& V, const PMat& B, int guard) {
  if (B.rows() != V.dim() || B.cols() != V.genus()) return false;
  return certified_rank(B, guard).rank == V.genus() && is_isotropic(V, B);
}

bool is_symplectic_map(const SymplecticSpace& V, const PMat& h) {
  return h.rows() == V.dim() && h.cols() == V.dim() && is_zero(PMat(h.transpose() * V.gram() * h - V.gram()));
}

PMat symplectic_basis(const SymplecticSpace& V, const PMat& W, int guard) {
  const FieldPtr& K = V.field();
  PMat pool = column_basis(realize(W, K), guard);
  PMat out = empty_cols(V.dim(), K);
  while (pool.cols() > 0) {
    PMat x = column(pool, 0);
    Eigen::Index best = -1;
    Rational best_v;
    Padic t;
    for (Eigen::Index j = 1; j < pool.cols(); ++j) {
      Padic v = V.pair(x, column(pool, j));
      if (v.is_zero()) continue;
      if (best < 0 || v.valuation() < best_v) {
        best = j;
        best_v = v.valuation();
        t = v;
      }
    }
    if (best < 0) throw ValidationError("subspace is not symplectic");
    PMat y = column(pool, best) * t.inverse();
    std::vector<Eigen::Index> rest;
    for (Eigen::Index j = 1; j < pool.cols(); ++j)
      if (j != best) rest.push_back(j);
    PMat R = project_off(V, x, y, columns(pool, rest, K));
    out = hstack(hstack(out, x), y);
    pool = R;
  }
  return out;
}

PMat lagrangian_avoiding(const SymplecticSpace& V, const PMat& M, std::uint64_t seed, std::vector<int>* retries,
                         int guard) {
  const FieldPtr& K = V.field();
  const int n = V.dim();
  PMat M0 = M.cols() == 0 ? empty_cols(n, K) : column_basis(realize(M, K), guard);
  if (M0.cols() > V.genus())
    throw ValidationError("subspace of dimension " + std::to_string(M0.cols()) + " exceeds the genus " +
                          std::to_string(V.genus()));
  std::mt19937_64 rng(seed);
  if (retries) retries->clear();

  // Bv spans a symplectic subspace, Mc a subspace of it.
  auto solve = [&](auto&& self, const PMat& Bv, const PMat& Mc) -> PMat {
    if (Bv.cols() == 0) return empty_cols(n, K);
    if (Mc.cols() == 0) {
      PMat S = symplectic_basis(V, Bv, guard);
      std::vector<Eigen::Index> xs;
      for (Eigen::Index j = 0; j < S.cols(); j += 2) xs.push_back(j);
      return columns(S, xs, K);
    }
    if (Mc.cols() == 1) {
      PMat m = column(Mc, 0);
      Eigen::Index best = -1;
      Rational best_v;
      for (Eigen::Index j = 0; j < Bv.cols(); ++j) {
        Padic v = V.pair(m, column(Bv, j));
        if (!v.is_zero() && (best < 0 || v.valuation() < best_v)) {
          best = j;
          best_v = v.valuation();
        }
      }
      if (best < 0) throw InternalContradiction("vector is orthogonal to the whole space");
      PMat y = column(Bv, best);
      PMat rest = project_off(V, m, y, Bv);
      PMat F = y;
      PMat Rb = column_basis(rest, guard);
      if (Rb.cols() > 0) F = hstack(y, self(self, Rb, empty_cols(n, K)));
      return F;
    }
    PMat x = PMat::Constant(n, 1, Padic::exact_zero(K));
    while (is_zero(x)) x = random_combination(Mc, rng, K);
    PMat y;
    int tries = 0;
    for (;;) {
      ++tries;
      if (tries > 1000) throw BudgetExhausted("no vector outside M and x^perp found");
      y = random_combination(Bv, rng, K);
      if (V.pair(x, y).is_zero()) continue;
      if (certified_rank(PMat(hstack(Mc, y)), guard).rank != Mc.cols() + 1) continue;
      break;
    }
    if (retries) retries->push_back(tries - 1);
    PMat Bn = column_basis(project_off(V, x, y, Bv), guard);
    PMat Mn = column_basis(project_off(V, x, y, hstack(Mc, y)), guard);
    return hstack(self(self, Bn, Mn), y);
  };
  PMat F = solve(solve, identity(n, K), M0);
  if (!is_lagrangian(V, F, guard)) throw InternalContradiction("constructed subspace is not Lagrangian");
  if (M0.cols() > 0 && intersection_dim(F, M0, guard) != 0)
    throw InternalContradiction("constructed Lagrangian meets the avoided subspace");
  return F;
}

SymplecticEigenbasis symplectic_eigenbasis(const SymplecticSpace& V, const PMat& h0, long m, const FieldPtr& L,
                                           int guard) {
  if (!is_symplectic_map(V, realize(h0, V.field())))
    throw ValidationError("no symplectic eigenbasis: the map does not preserve the form");
  std::vector<Eigenvalue> ev = eigen_multiplicities(h0, m);
  long m0 = 1;
  for (const auto& e : ev) m0 = std::lcm(m0, e.order);

  FieldPtr F = L ? L : V.field();
  if (!F->has_root_of_unity(m0) && F->is_unramified()) {
    const long p = F->p();
    long dp = m0;
    while (dp % p == 0) dp /= p;
    int f2 = F->f();
    while ((ipow(p, static_cast<unsigned long>(f2)) - 1) % dp != 0) f2 += F->f();
    FieldPtr F2 = LocalField::unramified(p, f2, F->precision());
    if (F2->has_root_of_unity(m0)) F = F2;
  }
  if (!F->has_root_of_unity(m0))
    throw FieldIncompatibility("eigenvalues of order " + std::to_string(m0) + " are not available in " +
                               F->describe() + "; pass a cyclotomic extension");
  SymplecticSpace W = V.base_change(F);
  PMat h = move_to(h0, F);
  const int n = W.dim();
  Padic zeta = F->root_of_unity(m0);
  std::vector<PMat> E(m0);
  int total = 0;
  for (long k = 0; k < m0; ++k) {
    E[k] = kernel(PMat(h - scalar_matrix(n, zeta.pow(k))), guard);
    total += static_cast<int>(E[k].cols());
  }
  if (total != n) throw ValidationError("no symplectic eigenbasis: the map is not diagonalizable");

  SymplecticEigenbasis out;
  out.field = F;
  out.order = m0;
  out.basis = empty_cols(n, F);
  for (long k = 0; k < m0; ++k) {
    const long kk = (m0 - k) % m0;
    if (E[k].cols() == 0 || kk < k) continue;
    if (kk == k) {
      PMat S = symplectic_basis(W, E[k], guard);
      out.basis = hstack(out.basis, S);
      for (Eigen::Index j = 0; j < S.cols(); j += 2) {
        out.ex.push_back(k);
        out.ey.push_back(k);
      }
      continue;
    }
    if (E[kk].cols() != E[k].cols())
      throw ValidationError("no symplectic eigenbasis: eigenvalues do not pair with their inverses");
    PMat X = E[k];
    PMat Y = E[kk] * inverse(PMat(X.transpose() * W.gram() * E[kk]), guard);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      out.basis = hstack(hstack(out.basis, column(X, j)), column(Y, j));
      out.ex.push_back(k);
      out.ey.push_back(kk);
    }
  }
  return out;
}

namespace {

// A Lagrangian piece on one or two eigenplanes.
struct Piece {
  std::vector<int> planes;
  int kind = 0;  // 1: x + y in one plane; 2: x_i + x_j, y_i - y_j; 0: x_i alone (costs one dimension)
};

struct PlaneSearch {
  const std::vector<long>& ex;
  const std::vector<long>& ey;

  // Every eigenvalue has multiplicity at most the genus of the remaining planes.
  bool perturbateur(const std::vector<int>& planes) const {
    std::map<long, int> c;
    for (int i : planes) {
      ++c[ex[i]];
      ++c[ey[i]];
    }
    for (const auto& [k, v] : c)
      if (v > static_cast<int>(planes.size())) return false;
    return true;
  }

  std::optional<std::vector<Piece>> solve(const std::vector<int>& planes, int budget) const {
    if (planes.empty()) return std::vector<Piece>{};
    // The most frequent eigenvalue, lowest exponent on ties.
    std::map<long, int> c;
    for (int i : planes) {
      ++c[ex[i]];
      ++c[ey[i]];
    }
    long mu1 = c.begin()->first;
    for (const auto& [k, v] : c)
      if (v > c[mu1]) mu1 = k;
    auto has = [&](int i) { return ex[i] == mu1 || ey[i] == mu1; };

    struct Cand {
      Piece piece;
      int rank;
    };
    std::vector<Cand> cands;
    for (size_t a = 0; a < planes.size(); ++a) {
      int i = planes[a];
      if (ex[i] != ey[i]) cands.push_back({{{i}, 1}, has(i) ? 0 : 2});
      for (size_t b = a + 1; b < planes.size(); ++b) {
        int j = planes[b];
        if (ex[i] != ex[j] && ey[i] != ey[j]) cands.push_back({{{i, j}, 2}, (has(i) || has(j)) ? 1 : 3});
      }
      if (budget > 0) cands.push_back({{{i}, 0}, 4});
    }
    auto remainder = [&](const Piece& pc) {
      std::vector<int> r;
      for (int i : planes)
        if (std::find(pc.planes.begin(), pc.planes.end(), i) == pc.planes.end()) r.push_back(i);
      return r;
    };
    // Steps keeping the hypothesis on the remainder come first.
    std::stable_sort(cands.begin(), cands.end(), [&](const Cand& u, const Cand& v) {
      bool pu = perturbateur(remainder(u.piece)), pv = perturbateur(remainder(v.piece));
      if (pu != pv) return pu;
      return u.rank < v.rank;
    });
    for (const auto& cd : cands) {
      auto rest = solve(remainder(cd.piece), budget - (cd.piece.kind == 0 ? 1 : 0));
      if (!rest) continue;
      rest->insert(rest->begin(), cd.piece);
      return rest;
    }
    return std::nullopt;
  }
};

}  // namespace

SmallIntersectionLagrangian lagrangian_h_small_intersection(const SymplecticSpace& V, const PMat& h, long m,
                                                            const FieldPtr& L, int guard) {
  if (!perturbateur_check(realize(h, V.field()), m).perturbateur)
    throw ValidationError("the map is not a perturbateur");
  SmallIntersectionLagrangian out;
  out.eigen = symplectic_eigenbasis(V, h, m, L, guard);
  const FieldPtr& F = out.eigen.field;
  const int g = V.genus();
  std::vector<int> all(g);
  std::iota(all.begin(), all.end(), 0);
  PlaneSearch search{out.eigen.ex, out.eigen.ey};
  auto pieces = search.solve(all, 1);
  if (!pieces) throw InternalContradiction("no Lagrangian with small intersection among eigenplane choices");
  const PMat& B = out.eigen.basis;
  PMat Fb = empty_cols(V.dim(), F);
  for (const auto& pc : *pieces) {
    const int i = pc.planes[0];
    PMat xi = column(B, 2 * i), yi = column(B, 2 * i + 1);
    if (pc.kind == 0) {
      Fb = hstack(Fb, xi);
    } else if (pc.kind == 1) {
      Fb = hstack(Fb, PMat(xi + yi));
    } else {
      const int j = pc.planes[1];
      Fb = hstack(hstack(Fb, PMat(xi + column(B, 2 * j))), PMat(yi - column(B, 2 * j + 1)));
    }
  }
  SymplecticSpace W = V.base_change(F);
  if (!is_lagrangian(W, Fb, guard)) throw InternalContradiction("constructed subspace is not Lagrangian");
  PMat hF = move_to(h, F) * Fb;
  out.intersection_dim = intersection_dim(Fb, hF, guard);
  if (out.intersection_dim > 1) throw InternalContradiction("constructed Lagrangian meets its image in dimension > 1");
  out.basis = Fb;
  return out;
}

PMat random_rational_lagrangian(const SymplecticSpace& V, std::uint64_t seed, const FieldPtr& K0) {
  const FieldPtr K = K0 ? K0 : V.field();
  SymplecticSpace Vk = K == V.field() ? V : SymplecticSpace(move_to(V.gram(), K));
  const int g = Vk.genus(), n = Vk.dim();
  PMat S = symplectic_basis(Vk, identity(n, K));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  // Chart: a_k, b_k with pair(a_k, b_l) = delta_kl and both families isotropic.
  PMat A = empty_cols(n, K), Bd = empty_cols(n, K);
  for (int i = 0; i < g; ++i) {
    PMat x = column(S, 2 * i), y = column(S, 2 * i + 1);
    if (rng() & 1) {
      A = hstack(A, x);
      Bd = hstack(Bd, y);
    } else {
      A = hstack(A, y);
      Bd = hstack(Bd, PMat(-x));
    }
  }
  PMat Sym = PMat::Constant(g, g, Padic::exact_zero(K));
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      Padic v(K, Rational(Integer(num(rng)), Integer(den(rng))));
      Sym(i, j) = v;
      Sym(j, i) = v;
    }
  PMat F = A + Bd * Sym;
  return K == V.field() ? F : move_to(F, V.field());
}

}  // namespace isocrys
