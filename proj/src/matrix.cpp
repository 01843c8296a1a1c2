#include "isocrys/matrix.hpp"

#include "isocrys/errors.hpp"

#include <stdexcept>

namespace isocrys {

FieldPtr field_of(const PMat& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j).field()) return M(i, j).field();
  return nullptr;
}

PMat to_field(const QMat& M, const FieldPtr& F) {
  PMat out(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      out(i, j) = M(i, j).is_zero() ? Padic::exact_zero(F) : Padic(F, M(i, j));
  return out;
}

PMat realize(const PMat& M, const FieldPtr& F) {
  return M.unaryExpr([&](const Padic& a) { return a.realize(F); });
}

PMat identity(int n, const FieldPtr& F) {
  PMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = (i == j) ? F->one() : Padic::exact_zero(F);
  return out;
}

PMat scalar_matrix(int n, const Padic& c) {
  PMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = (i == j) ? c : Padic::exact_zero(c.field());
  return out;
}

PMat frobenius(const PMat& M) {
  return M.unaryExpr([](const Padic& a) { return a.frobenius(); });
}

PMat frobenius_inverse(const PMat& M) {
  return M.unaryExpr([](const Padic& a) { return a.frobenius_inverse(); });
}

PMat frobenius_power(const PMat& M, int k) {
  FieldPtr F = field_of(M);
  if (!F) return M;
  const int f = F->f();
  int r = ((k % f) + f) % f;
  PMat out = M;
  for (int i = 0; i < r; ++i) out = frobenius(out);
  return out;
}

PMat embed(const PMat& M, const FieldPtr& L) {
  return M.unaryExpr([&](const Padic& a) { return embed(a, L); });
}

PMat restrict_to(const PMat& M, const FieldPtr& K) {
  return M.unaryExpr([&](const Padic& a) { return restrict_to(a, K); });
}

bool in_subfield(const PMat& M, const FieldPtr& K) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (!in_subfield(M(i, j), K)) return false;
  return true;
}

PMat apply_automorphism(const PMat& M, int idx) {
  return M.unaryExpr([&](const Padic& a) {
    if (!a.field()) return a;
    return a.field()->apply_automorphism(idx, a);
  });
}

Padic lift_unramified(const Padic& a, const FieldPtr& K2) {
  if (a.is_constant()) return a.realize(K2);
  const FieldPtr& K = a.field();
  if (!K->is_unramified() || !K2->is_unramified() || K->p() != K2->p() || K2->f() % K->f() != 0)
    throw FieldIncompatibility("no unramified embedding from " + K->describe() + " into " + K2->describe());
  if (K->f() == K2->f()) return a.realize(K2);
  // x -> y^{(q'-1)/(q-1)} respects the Teichmüller generators and Frobenius.
  Integer m = (K2->q() - 1) / (K->q() - 1);
  Padic ym = K2->generator().pow(m.get_si());
  auto cs = a.base_coordinates();
  Padic out = Padic::exact_zero(K2);
  Padic pw = K2->one();
  for (size_t j = 0; j < cs.size(); ++j) {
    if (!cs[j].is_exact_zero()) out += embed(cs[j], K2) * pw;
    pw = pw * ym;
  }
  return out;
}

PMat lift_unramified(const PMat& M, const FieldPtr& K2) {
  return M.unaryExpr([&](const Padic& a) { return lift_unramified(a, K2); });
}

bool is_zero(const PMat& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (!M(i, j).is_zero()) return false;
  return true;
}

bool is_zero(const QMat& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (!M(i, j).is_zero()) return false;
  return true;
}

std::int64_t min_abs_precision_units(const PMat& M) {
  std::int64_t a = kExact;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) a = std::min(a, M(i, j).abs_precision_units());
  return a;
}

PMat matrix_from_coords(const FieldPtr& F, const std::vector<std::vector<std::vector<BaseCoords>>>& rows) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = n ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  PMat out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != m) throw std::invalid_argument("ragged matrix");
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = Padic::from_coords(F, rows[i][j]);
  }
  return out;
}

}  // namespace isocrys
