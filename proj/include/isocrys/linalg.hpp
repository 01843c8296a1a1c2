#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isocrys/errors.hpp"
#include "isocrys/matrix.hpp"

namespace isocrys {

inline constexpr int kDefaultGuard = 8;

struct PivotRecord {
  int row = 0;
  int col = 0;
  Rational valuation;  // zero for exact rational scalars
  Rational digits;     // spare relative digits, -1 when exact
};

// Evidence for a rank decision: pivots with enough spare digits, and a
// discarded block that vanishes at least `guard` digits past the largest pivot.
struct RankCertificate {
  int rank = 0;
  int guard = kDefaultGuard;
  std::vector<PivotRecord> pivots;
  std::optional<Rational> zero_floor;  // absolute precision of discarded block, if inexact
};

template <class T>
struct Elimination {
  Mat<T> reduced;            // rows/cols permuted, forward eliminated
  std::vector<int> rperm;    // position -> original row
  std::vector<int> cperm;    // position -> original column
  int rank = 0;
  bool remainder_zero = true;
  RankCertificate cert;
};

// Gaussian elimination with full pivoting on minimal valuation.
// Throws PrecisionFailure when a pivot or a zero decision cannot be certified.
template <class T>
Elimination<T> eliminate(const Mat<T>& M, int guard = kDefaultGuard, int max_pivots = -1);

template <class T>
RankCertificate certified_rank(const Mat<T>& M, int guard = kDefaultGuard);
template <class T>
int rank(const Mat<T>& M, int guard = kDefaultGuard);
template <class T>
Mat<T> kernel(const Mat<T>& M, int guard = kDefaultGuard);
template <class T>
Mat<T> column_basis(const Mat<T>& M, int guard = kDefaultGuard);
template <class T>
Mat<T> left_inverse(const Mat<T>& W, int guard = kDefaultGuard);
template <class T>
Mat<T> inverse(const Mat<T>& M, int guard = kDefaultGuard);
template <class T>
std::optional<Mat<T>> solve(const Mat<T>& M, const Mat<T>& B, int guard = kDefaultGuard);
template <class T>
T determinant(const Mat<T>& M, int guard = kDefaultGuard);
template <class T>
int intersection_dim(const Mat<T>& U, const Mat<T>& V, int guard = kDefaultGuard);
template <class T>
Mat<T> intersection(const Mat<T>& U, const Mat<T>& V, int guard = kDefaultGuard);
template <class T>
bool same_span(const Mat<T>& U, const Mat<T>& V, int guard = kDefaultGuard);
template <class T>
bool contains(const Mat<T>& U, const Mat<T>& V, int guard = kDefaultGuard);
// Standard basis vectors completing the columns of U to a basis.
template <class T>
Mat<T> complement(const Mat<T>& U, int n, int guard = kDefaultGuard);
// Coefficients c_0..c_n of det(xI - A); division free.
template <class T>
std::vector<T> charpoly(const Mat<T>& A);

std::string describe(const RankCertificate& c);

#define ISOCRYS_LINALG_EXTERN(T)                                                     \
  extern template Elimination<T> eliminate(const Mat<T>&, int, int);                 \
  extern template RankCertificate certified_rank(const Mat<T>&, int);                \
  extern template int rank(const Mat<T>&, int);                                      \
  extern template Mat<T> kernel(const Mat<T>&, int);                                 \
  extern template Mat<T> column_basis(const Mat<T>&, int);                           \
  extern template Mat<T> left_inverse(const Mat<T>&, int);                           \
  extern template Mat<T> inverse(const Mat<T>&, int);                                \
  extern template std::optional<Mat<T>> solve(const Mat<T>&, const Mat<T>&, int);   \
  extern template T determinant(const Mat<T>&, int);                                 \
  extern template int intersection_dim(const Mat<T>&, const Mat<T>&, int);           \
  extern template Mat<T> intersection(const Mat<T>&, const Mat<T>&, int);            \
  extern template bool same_span(const Mat<T>&, const Mat<T>&, int);                 \
  extern template bool contains(const Mat<T>&, const Mat<T>&, int);                  \
  extern template Mat<T> complement(const Mat<T>&, int, int);                        \
  extern template std::vector<T> charpoly(const Mat<T>&);

ISOCRYS_LINALG_EXTERN(Rational)
ISOCRYS_LINALG_EXTERN(Padic)

}  // namespace isocrys
