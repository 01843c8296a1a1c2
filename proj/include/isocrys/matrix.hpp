#pragma once

#include <Eigen/Core>
#include <vector>

#include "isocrys/padic.hpp"
#include "isocrys/rational.hpp"

namespace isocrys {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using PMat = Mat<Padic>;
using QMat = Mat<Rational>;

FieldPtr field_of(const PMat& M);
PMat to_field(const QMat& M, const FieldPtr& F);
PMat realize(const PMat& M, const FieldPtr& F);
PMat identity(int n, const FieldPtr& F);
PMat scalar_matrix(int n, const Padic& c);

// Entrywise sigma and sigma^{-1} on an unramified level.
PMat frobenius(const PMat& M);
PMat frobenius_inverse(const PMat& M);
PMat frobenius_power(const PMat& M, int k);

PMat embed(const PMat& M, const FieldPtr& L);
PMat restrict_to(const PMat& M, const FieldPtr& K);
bool in_subfield(const PMat& M, const FieldPtr& K);
PMat apply_automorphism(const PMat& M, int idx);
// Unramified K_q into K_{q'} for f | f', matching Teichmüller generators.
Padic lift_unramified(const Padic& a, const FieldPtr& K2);
PMat lift_unramified(const PMat& M, const FieldPtr& K2);

bool is_zero(const PMat& M);
bool is_zero(const QMat& M);
std::int64_t min_abs_precision_units(const PMat& M);

// Entries converted from a rational matrix into the field and back where exact.
PMat matrix_from_coords(const FieldPtr& F, const std::vector<std::vector<std::vector<BaseCoords>>>& rows);

template <class T>
Mat<T> hstack(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Mat<T> out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

template <class T>
Mat<T> vstack(const Mat<T>& a, const Mat<T>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  Mat<T> out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

template <class T>
Mat<T> block_diagonal(const std::vector<Mat<T>>& blocks) {
  Eigen::Index n = 0, m = 0;
  for (const auto& b : blocks) {
    n += b.rows();
    m += b.cols();
  }
  Mat<T> out = Mat<T>::Zero(n, m);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

template <class T>
Mat<T> matrix_power(const Mat<T>& A, long n) {
  Mat<T> r = Mat<T>::Identity(A.rows(), A.cols());
  Mat<T> b = A;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      if (first) {
        r = b;
        first = false;
      } else {
        r = (r * b).eval();
      }
    }
    n >>= 1;
    if (n > 0) b = (b * b).eval();
  }
  return r;
}

}  // namespace isocrys
