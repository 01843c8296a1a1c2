#include "isocrys/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace isocrys {

namespace {

template <class T>
constexpr bool kPadic = std::is_same_v<T, Padic>;

template <class T>
bool nonzero(const T& x) {
  return !x.is_zero();
}

template <class T>
bool exactly_zero(const T& x) {
  if constexpr (kPadic<T>)
    return x.is_exact_zero();
  else
    return x.is_zero();
}

template <class T>
Mat<T> prepare(const Mat<T>& M) {
  if constexpr (kPadic<T>) {
    FieldPtr F = field_of(M);
    if (!F) {
      for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
          if (!M(i, j).is_zero()) throw std::logic_error("p-adic matrix of constants has no field");
      return M;
    }
    return realize(M, F);
  } else {
    return M;
  }
}

template <class T>
T one_like(const Mat<T>& M) {
  if constexpr (kPadic<T>) {
    FieldPtr F = field_of(M);
    return F ? F->one() : Padic(1);
  } else {
    return T(1);
  }
}

template <class T>
T zero_like(const Mat<T>& M) {
  if constexpr (kPadic<T>) {
    FieldPtr F = field_of(M);
    return F ? Padic::exact_zero(F) : Padic();
  } else {
    return T(0);
  }
}

int parity(std::vector<int> perm) {
  int s = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    while (perm[i] != static_cast<int>(i)) {
      std::swap(perm[i], perm[static_cast<size_t>(perm[i])]);
      s ^= 1;
    }
  return s;
}

template <class T>
void check_pivot(const T& piv, int guard, PivotRecord& rec) {
  if constexpr (kPadic<T>) {
    const int e = piv.field()->e();
    const std::int64_t rel = piv.relative_units();
    rec.valuation = piv.valuation();
    rec.digits = Rational(Integer(static_cast<long>(rel)), Integer(e));
    if (rel < static_cast<std::int64_t>(guard) * e) {
      std::ostringstream os;
      os << "pivot at valuation " << rec.valuation << " carries only " << rec.digits << " digits (guard " << guard
         << ")";
      throw PrecisionFailure(os.str());
    }
  } else {
    rec.valuation = 0;
    rec.digits = -1;
  }
}

}  // namespace

std::string describe(const RankCertificate& c) {
  std::ostringstream os;
  os << "rank " << c.rank << " (guard " << c.guard << "; pivots";
  for (const auto& p : c.pivots) os << " v=" << p.valuation << "/d=" << p.digits;
  if (c.zero_floor) os << "; discarded block O(p^" << *c.zero_floor << ")";
  os << ")";
  return os.str();
}

template <class T>
Elimination<T> eliminate(const Mat<T>& M0, int guard, int max_pivots) {
  Elimination<T> E;
  E.reduced = prepare(M0);
  Mat<T>& U = E.reduced;
  const int n = static_cast<int>(U.rows()), m = static_cast<int>(U.cols());
  E.rperm.resize(static_cast<size_t>(n));
  E.cperm.resize(static_cast<size_t>(m));
  std::iota(E.rperm.begin(), E.rperm.end(), 0);
  std::iota(E.cperm.begin(), E.cperm.end(), 0);
  E.cert.guard = guard;
  const int limit = std::min(n, m);
  int s = 0;
  for (; s < limit; ++s) {
    if (max_pivots >= 0 && s >= max_pivots) break;
    int bi = -1, bj = -1;
    std::int64_t best = kExact;
    for (int i = s; i < n && !(bi >= 0 && !kPadic<T>); ++i)
      for (int j = s; j < m; ++j) {
        if (!nonzero(U(i, j))) continue;
        if constexpr (kPadic<T>) {
          std::int64_t v = U(i, j).valuation_units();
          if (v < best) {
            best = v;
            bi = i;
            bj = j;
          }
        } else {
          bi = i;
          bj = j;
          break;
        }
      }
    if (bi < 0) break;
    PivotRecord rec;
    check_pivot(U(bi, bj), guard, rec);
    if (bi != s) {
      U.row(bi).swap(U.row(s));
      std::swap(E.rperm[static_cast<size_t>(bi)], E.rperm[static_cast<size_t>(s)]);
    }
    if (bj != s) {
      U.col(bj).swap(U.col(s));
      std::swap(E.cperm[static_cast<size_t>(bj)], E.cperm[static_cast<size_t>(s)]);
    }
    rec.row = E.rperm[static_cast<size_t>(s)];
    rec.col = E.cperm[static_cast<size_t>(s)];
    E.cert.pivots.push_back(rec);
    const T pinv = T(1) / U(s, s);
    for (int r = s + 1; r < n; ++r) {
      if (exactly_zero(U(r, s))) continue;
      const T factor = U(r, s) * pinv;
      for (int c = s + 1; c < m; ++c) {
        if (exactly_zero(U(s, c))) continue;
        U(r, c) -= factor * U(s, c);
      }
      U(r, s) = zero_like(U);
    }
  }
  E.rank = s;
  E.cert.rank = s;
  E.remainder_zero = true;
  for (int i = s; i < n && E.remainder_zero; ++i)
    for (int j = s; j < m; ++j)
      if (nonzero(U(i, j))) {
        E.remainder_zero = false;
        break;
      }
  if constexpr (kPadic<T>) {
    if (E.remainder_zero && s < n && s < m) {
      std::int64_t floor = kExact;
      for (int i = s; i < n; ++i)
        for (int j = s; j < m; ++j) floor = std::min(floor, U(i, j).abs_precision_units());
      if (floor < kExact) {
        FieldPtr F = field_of(U);
        const int e = F->e();
        std::int64_t top = 0;
        if (s > 0) {
          top = -kExact;
          for (int i = 0; i < s; ++i) top = std::max(top, U(i, i).valuation_units());
        }
        E.cert.zero_floor = Rational(Integer(static_cast<long>(floor)), Integer(e));
        if (floor - top < static_cast<std::int64_t>(guard) * e) {
          std::ostringstream os;
          os << "cannot certify rank " << s << ": discarded block known only to O(p^" << *E.cert.zero_floor
             << ") against pivot valuation " << Rational(Integer(static_cast<long>(top)), Integer(e));
          throw PrecisionFailure(os.str());
        }
      }
    }
  }
  return E;
}

template <class T>
RankCertificate certified_rank(const Mat<T>& M, int guard) {
  return eliminate(M, guard).cert;
}

template <class T>
int rank(const Mat<T>& M, int guard) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  return eliminate(M, guard).rank;
}

template <class T>
Mat<T> kernel(const Mat<T>& M, int guard) {
  const int m = static_cast<int>(M.cols());
  if (M.rows() == 0) {
    Mat<T> I = Mat<T>::Zero(m, m);
    for (int i = 0; i < m; ++i) I(i, i) = T(1);
    return I;
  }
  Elimination<T> E = eliminate(M, guard);
  const int r = E.rank;
  const Mat<T>& U = E.reduced;
  const T one = one_like(U), zero = zero_like(U);
  Mat<T> out(m, m - r);
  for (int c = r; c < m; ++c) {
    std::vector<T> y(static_cast<size_t>(m), zero);
    y[static_cast<size_t>(c)] = one;
    for (int i = r - 1; i >= 0; --i) {
      T acc = U(i, c);
      for (int j = i + 1; j < r; ++j)
        if (!exactly_zero(U(i, j))) acc += U(i, j) * y[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] = -(acc / U(i, i));
    }
    for (int i = 0; i < m; ++i) out(E.cperm[static_cast<size_t>(i)], c - r) = y[static_cast<size_t>(i)];
  }
  return out;
}

namespace {
template <class T>
std::vector<int> basis_columns(const Mat<T>& M, int guard) {
  if (M.rows() == 0 || M.cols() == 0) return {};
  Elimination<T> E = eliminate(M, guard);
  std::vector<int> cols(E.cperm.begin(), E.cperm.begin() + E.rank);
  std::sort(cols.begin(), cols.end());
  return cols;
}
}  // namespace

template <class T>
Mat<T> column_basis(const Mat<T>& M, int guard) {
  auto cols = basis_columns(M, guard);
  Mat<T> out(M.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = M.col(cols[i]);
  return out;
}

template <class T>
Mat<T> inverse(const Mat<T>& M0, int guard) {
  if (M0.rows() != M0.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  Mat<T> A = prepare(M0);
  const int n = static_cast<int>(A.rows());
  const T one = one_like(A), zero = zero_like(A);
  Mat<T> B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = (i == j) ? one : zero;
  std::vector<int> cperm(static_cast<size_t>(n));
  std::iota(cperm.begin(), cperm.end(), 0);
  for (int s = 0; s < n; ++s) {
    int bi = -1, bj = -1;
    std::int64_t best = kExact;
    for (int i = s; i < n; ++i)
      for (int j = s; j < n; ++j) {
        if (!nonzero(A(i, j))) continue;
        if constexpr (kPadic<T>) {
          std::int64_t v = A(i, j).valuation_units();
          if (v < best) {
            best = v;
            bi = i;
            bj = j;
          }
        } else if (bi < 0) {
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) throw PrecisionFailure("matrix is singular to working precision");
    PivotRecord rec;
    check_pivot(A(bi, bj), guard, rec);
    A.row(bi).swap(A.row(s));
    B.row(bi).swap(B.row(s));
    A.col(bj).swap(A.col(s));
    std::swap(cperm[static_cast<size_t>(bj)], cperm[static_cast<size_t>(s)]);
    const T pinv = one / A(s, s);
    for (int c = 0; c < n; ++c) {
      if (!exactly_zero(A(s, c))) A(s, c) = A(s, c) * pinv;
      if (!exactly_zero(B(s, c))) B(s, c) = B(s, c) * pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == s || exactly_zero(A(r, s))) continue;
      const T factor = A(r, s);
      for (int c = 0; c < n; ++c) {
        if (!exactly_zero(A(s, c))) A(r, c) -= factor * A(s, c);
        if (!exactly_zero(B(s, c))) B(r, c) -= factor * B(s, c);
      }
      A(r, s) = zero;
    }
  }
  Mat<T> out(n, n);
  for (int s = 0; s < n; ++s) out.row(cperm[static_cast<size_t>(s)]) = B.row(s);
  return out;
}

template <class T>
Mat<T> left_inverse(const Mat<T>& W, int guard) {
  Elimination<T> E = eliminate(W, guard);
  const int r = static_cast<int>(W.cols());
  if (E.rank != r) throw PrecisionFailure("left inverse of a rank-deficient matrix");
  std::vector<int> rows(E.rperm.begin(), E.rperm.begin() + r);
  Mat<T> WR(r, r);
  for (int i = 0; i < r; ++i) WR.row(i) = W.row(rows[static_cast<size_t>(i)]);
  Mat<T> inv = inverse(WR, guard);
  const T zero = zero_like(inv);
  Mat<T> X(r, W.rows());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < W.rows(); ++j) X(i, j) = zero;
  for (int i = 0; i < r; ++i) X.col(rows[static_cast<size_t>(i)]) = inv.col(i);
  return X;
}

template <class T>
std::optional<Mat<T>> solve(const Mat<T>& M, const Mat<T>& B, int guard) {
  auto cols = basis_columns(M, guard);
  const T zero = zero_like(M);
  Mat<T> X(M.cols(), B.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = zero;
  if (!cols.empty()) {
    Mat<T> Mb(M.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) Mb.col(static_cast<Eigen::Index>(i)) = M.col(cols[i]);
    Mat<T> Xb = left_inverse(Mb, guard) * B;
    for (size_t i = 0; i < cols.size(); ++i) X.row(cols[i]) = Xb.row(static_cast<Eigen::Index>(i));
  }
  Mat<T> res = M * X - B;
  for (Eigen::Index i = 0; i < res.rows(); ++i)
    for (Eigen::Index j = 0; j < res.cols(); ++j)
      if (nonzero(res(i, j))) return std::nullopt;
  return X;
}

template <class T>
T determinant(const Mat<T>& M, int guard) {
  if (M.rows() != M.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (M.rows() == 0) return T(1);
  Elimination<T> E = eliminate(M, guard);
  const int n = static_cast<int>(M.rows());
  if (E.rank < n) {
    if constexpr (kPadic<T>) {
      FieldPtr F = field_of(E.reduced);
      std::int64_t v = 0;
      for (int i = 0; i < E.rank; ++i) v += E.reduced(i, i).valuation_units();
      std::int64_t floor = kExact;
      for (int i = E.rank; i < n; ++i)
        for (int j = E.rank; j < n; ++j) floor = std::min(floor, E.reduced(i, j).abs_precision_units());
      return floor >= kExact ? Padic::exact_zero(F) : Padic::zero(F, v + floor);
    } else {
      return T(0);
    }
  }
  T d = E.reduced(0, 0);
  for (int i = 1; i < n; ++i) d = d * E.reduced(i, i);
  if (parity(E.rperm) ^ parity(E.cperm)) d = -d;
  return d;
}

template <class T>
int intersection_dim(const Mat<T>& U, const Mat<T>& V, int guard) {
  return rank(U, guard) + rank(V, guard) - rank(hstack(U, V), guard);
}

template <class T>
Mat<T> intersection(const Mat<T>& U, const Mat<T>& V, int guard) {
  if (U.cols() == 0 || V.cols() == 0) return Mat<T>(U.rows(), 0);
  Mat<T> Ub = column_basis(U, guard), Vb = column_basis(V, guard);
  Mat<T> K = kernel(hstack(Ub, Mat<T>(-Vb)), guard);
  if (K.cols() == 0) return Mat<T>(U.rows(), 0);
  Mat<T> W = Ub * K.topRows(Ub.cols());
  return column_basis(W, guard);
}

template <class T>
bool same_span(const Mat<T>& U, const Mat<T>& V, int guard) {
  int r = rank(hstack(U, V), guard);
  return r == rank(U, guard) && r == rank(V, guard);
}

template <class T>
bool contains(const Mat<T>& U, const Mat<T>& V, int guard) {
  return rank(hstack(U, V), guard) == rank(U, guard);
}

template <class T>
Mat<T> complement(const Mat<T>& U, int n, int guard) {
  T one, zero;
  if constexpr (kPadic<T>) {
    FieldPtr F = field_of(U);
    one = F ? F->one() : Padic(1);
    zero = F ? Padic::exact_zero(F) : Padic();
  } else {
    one = T(1);
    zero = T(0);
  }
  Mat<T> cur = U;
  int r = rank(U, guard);
  Mat<T> out(n, 0);
  for (int i = 0; i < n && r < n; ++i) {
    Mat<T> e(n, 1);
    for (int j = 0; j < n; ++j) e(j, 0) = (i == j) ? one : zero;
    Mat<T> cand = hstack(cur, e);
    int rc = rank(cand, guard);
    if (rc > r) {
      cur = cand;
      r = rc;
      out = hstack(out, e);
    }
  }
  return out;
}

template <class T>
std::vector<T> charpoly(const Mat<T>& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw std::invalid_argument("charpoly of a non-square matrix");
  std::vector<T> v{T(1)};
  for (int r = 1; r <= n; ++r) {
    std::vector<T> q(static_cast<size_t>(r + 1), T(0));
    q[0] = T(1);
    q[1] = -A(r - 1, r - 1);
    if (r >= 2) {
      std::vector<T> w(static_cast<size_t>(r - 1));
      for (int i = 0; i < r - 1; ++i) w[static_cast<size_t>(i)] = A(i, r - 1);
      for (int k = 0; k <= r - 2; ++k) {
        T dot(0);
        for (int i = 0; i < r - 1; ++i) dot += A(r - 1, i) * w[static_cast<size_t>(i)];
        q[static_cast<size_t>(k + 2)] = -dot;
        if (k < r - 2) {
          std::vector<T> nw(static_cast<size_t>(r - 1), T(0));
          for (int i = 0; i < r - 1; ++i)
            for (int j = 0; j < r - 1; ++j) nw[static_cast<size_t>(i)] += A(i, j) * w[static_cast<size_t>(j)];
          w = std::move(nw);
        }
      }
    }
    std::vector<T> nv(static_cast<size_t>(r + 1), T(0));
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j <= std::min(i, r - 1); ++j) nv[static_cast<size_t>(i)] += q[static_cast<size_t>(i - j)] * v[static_cast<size_t>(j)];
    v = std::move(nv);
  }
  std::reverse(v.begin(), v.end());
  return v;
}

#define ISOCRYS_LINALG_INSTANTIATE(T)                                         \
  template Elimination<T> eliminate(const Mat<T>&, int, int);                 \
  template RankCertificate certified_rank(const Mat<T>&, int);                \
  template int rank(const Mat<T>&, int);                                      \
  template Mat<T> kernel(const Mat<T>&, int);                                 \
  template Mat<T> column_basis(const Mat<T>&, int);                           \
  template Mat<T> left_inverse(const Mat<T>&, int);                           \
  template Mat<T> inverse(const Mat<T>&, int);                                \
  template std::optional<Mat<T>> solve(const Mat<T>&, const Mat<T>&, int);   \
  template T determinant(const Mat<T>&, int);                                 \
  template int intersection_dim(const Mat<T>&, const Mat<T>&, int);           \
  template Mat<T> intersection(const Mat<T>&, const Mat<T>&, int);            \
  template bool same_span(const Mat<T>&, const Mat<T>&, int);                 \
  template bool contains(const Mat<T>&, const Mat<T>&, int);                  \
  template Mat<T> complement(const Mat<T>&, int, int);                        \
  template std::vector<T> charpoly(const Mat<T>&);

ISOCRYS_LINALG_INSTANTIATE(Rational)
ISOCRYS_LINALG_INSTANTIATE(Padic)

}  // namespace isocrys
