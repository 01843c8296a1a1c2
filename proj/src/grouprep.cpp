#include "isocrys/grouprep.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "isocrys/bounds.hpp"

namespace isocrys {

namespace {

// ---------------------------------------------------------------- arithmetic mod P

using i64 = long long;
using MatP = std::vector<std::vector<i64>>;

i64 md(i64 a, i64 P) {
  a %= P;
  return a < 0 ? a + P : a;
}

i64 pw(i64 b, i64 e, i64 P) {
  i64 r = 1;
  b = md(b, P);
  while (e > 0) {
    if (e & 1) r = r * b % P;
    b = b * b % P;
    e >>= 1;
  }
  return r;
}

i64 inv(i64 a, i64 P) { return pw(a, P - 2, P); }

std::vector<long> prime_factors_of(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

i64 primitive_root(i64 P) {
  auto fs = prime_factors_of(static_cast<long>(P - 1));
  for (i64 g = 2;; ++g) {
    bool ok = true;
    for (long f : fs) ok = ok && pw(g, (P - 1) / f, P) != 1;
    if (ok) return g;
  }
}

MatP matmul(const MatP& A, const MatP& B, i64 P) {
  const size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
  MatP C(n, std::vector<i64>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (!A[i][t]) continue;
      for (size_t j = 0; j < m; ++j) C[i][j] = (C[i][j] + A[i][t] * B[t][j]) % P;
    }
  return C;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(MatP& A, i64 P, int ncols) {
  std::vector<int> piv;
  const int rows = static_cast<int>(A.size());
  int r = 0;
  for (int c = 0; c < ncols && r < rows; ++c) {
    int s = -1;
    for (int i = r; i < rows; ++i)
      if (A[i][c]) {
        s = i;
        break;
      }
    if (s < 0) continue;
    std::swap(A[r], A[s]);
    i64 iv = inv(A[r][c], P);
    for (auto& v : A[r]) v = v * iv % P;
    for (int i = 0; i < rows; ++i) {
      if (i == r || !A[i][c]) continue;
      i64 f = A[i][c];
      for (size_t j = 0; j < A[i].size(); ++j) A[i][j] = md(A[i][j] - f * A[r][j], P);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

// Columns spanning the kernel.
MatP kernel_mod(MatP A, i64 P) {
  const int n = A.empty() ? 0 : static_cast<int>(A[0].size());
  auto piv = rref(A, P, n);
  std::vector<bool> is_piv(n, false);
  for (int c : piv) is_piv[c] = true;
  MatP K(n);
  for (int f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<i64> v(n, 0);
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = md(-A[r][f], P);
    for (int i = 0; i < n; ++i) K[i].push_back(v[i]);
  }
  return K;
}

// Characteristic polynomial via Hessenberg reduction; coefficients low to high.
std::vector<i64> charpoly_mod(MatP H, i64 P) {
  const int n = static_cast<int>(H.size());
  for (int j = 0; j + 2 < n; ++j) {
    int s = -1;
    for (int i = j + 1; i < n; ++i)
      if (H[i][j]) {
        s = i;
        break;
      }
    if (s < 0) continue;
    if (s != j + 1) {
      std::swap(H[s], H[j + 1]);
      for (int i = 0; i < n; ++i) std::swap(H[i][s], H[i][j + 1]);
    }
    i64 iv = inv(H[j + 1][j], P);
    for (int i = j + 2; i < n; ++i) {
      if (!H[i][j]) continue;
      i64 f = H[i][j] * iv % P;
      for (int c = 0; c < n; ++c) H[i][c] = md(H[i][c] - f * H[j + 1][c], P);
      for (int r = 0; r < n; ++r) H[r][j + 1] = (H[r][j + 1] + f * H[r][i]) % P;
    }
  }
  std::vector<std::vector<i64>> p(n + 1);
  p[0] = {1};
  for (int m = 1; m <= n; ++m) {
    std::vector<i64> cur(m + 1, 0);
    for (size_t t = 0; t < p[m - 1].size(); ++t) {
      cur[t + 1] = (cur[t + 1] + p[m - 1][t]) % P;
      cur[t] = md(cur[t] - H[m - 1][m - 1] * p[m - 1][t], P);
    }
    i64 prod = 1;
    for (int i = 1; i < m; ++i) {
      prod = prod * H[m - i][m - i - 1] % P;
      i64 coef = H[m - i - 1][m - 1] * prod % P;
      if (!coef) continue;
      for (size_t t = 0; t < p[m - i - 1].size(); ++t) cur[t] = md(cur[t] - coef * p[m - i - 1][t], P);
    }
    p[m] = std::move(cur);
  }
  return p[n];
}

bool is_prime_ll(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long euler_phi(long n) {
  long r = n;
  for (long f : prime_factors_of(n)) r = r / f * (f - 1);
  return r;
}

long mobius(long n) {
  long r = 1;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

// c_n(k) = mu(n / (n,k)) phi(n) / phi(n / (n,k))
long ramanujan(long n, long k) {
  long g = std::gcd(n, ((k % n) + n) % n == 0 ? n : ((k % n) + n) % n);
  long t = n / g;
  return mobius(t) * euler_phi(n) / euler_phi(t);
}

// Identifies a p-adic value as an integer in [0, n].
int certify_integer(const Padic& v, int n, const char* what) {
  int found = -1;
  for (int k = 0; k <= n; ++k)
    if ((v - Padic(Rational(k))).is_zero()) {
      if (found >= 0) throw PrecisionFailure(std::string(what) + ": value not separated at working precision");
      found = k;
    }
  if (found < 0) throw InternalContradiction(std::string(what) + ": value is not an integer in range");
  if (!v.is_constant()) {
    long need = kDefaultGuard;
    for (long t = n; t > 0; t /= v.field()->p()) ++need;
    if (v.abs_precision_units() < need * v.field()->e())
      throw PrecisionFailure(std::string(what) + ": too few digits to certify");
  }
  return found;
}

Padic trace(const PMat& M) {
  Padic t = M(0, 0);
  for (Eigen::Index i = 1; i < M.rows(); ++i) t += M(i, i);
  return t;
}

std::pair<long, long> split_p(long m, long p) {
  long pa = 1;
  while (m % p == 0) {
    m /= p;
    pa *= p;
  }
  return {pa, m};
}

}  // namespace

// ---------------------------------------------------------------- characters

CharacterTable CharacterTable::compute(const FiniteGroup& G) {
  const int n = G.order();
  if (n > kCharacterTableCeiling)
    throw ValidationError("character table: group order " + std::to_string(n) + " exceeds the ceiling " +
                          std::to_string(kCharacterTableCeiling));
  CharacterTable T;
  T.order_ = n;
  T.e_ = G.exponent();
  T.classes_ = G.conjugacy_classes();
  T.class_of_ = G.class_of();
  const int r = static_cast<int>(T.classes_.size());
  const int e = T.e_;
  i64 P = 1;
  while (!(P > 2 * n && is_prime_ll(P))) P += e;
  T.P_ = P;
  const i64 Z = pw(primitive_root(P), (P - 1) / e, P);
  const int id = T.class_of_[0];

  std::vector<MatP> N(r, MatP(r, std::vector<i64>(r, 0)));  // N[s][t][u]
  for (int u = 0; u < r; ++u) {
    int z = T.classes_[u][0];
    for (int x = 0; x < n; ++x) {
      int s = T.class_of_[x];
      int t = T.class_of_[G.mul(G.inv(x), z)];
      ++N[s][t][u];
    }
  }
  // Split F_P^r into common eigenlines of the class matrices.
  std::mt19937_64 rng(1);
  MatP start(r, std::vector<i64>(r, 0));
  for (int i = 0; i < r; ++i) start[i][i] = 1;
  std::vector<MatP> spaces{start};
  for (int round = 0; round < 64; ++round) {
    bool all_lines = true;
    for (const auto& V : spaces) all_lines = all_lines && V[0].size() == 1;
    if (all_lines) break;
    MatP M(r, std::vector<i64>(r, 0));
    for (int s = 0; s < r; ++s) {
      i64 c = static_cast<i64>(rng() % static_cast<unsigned long long>(P));
      for (int t = 0; t < r; ++t)
        for (int u = 0; u < r; ++u) M[t][u] = (M[t][u] + c * N[s][t][u]) % P;
    }
    std::vector<MatP> next;
    for (const auto& V : spaces) {
      const int d = static_cast<int>(V[0].size());
      if (d == 1) {
        next.push_back(V);
        continue;
      }
      // Coordinates of M V in the basis V.
      MatP MV = matmul(M, V, P);
      MatP aug(r, std::vector<i64>(2 * d));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < d; ++j) {
          aug[i][j] = V[i][j];
          aug[i][d + j] = MV[i][j];
        }
      auto piv = rref(aug, P, d);
      if (static_cast<int>(piv.size()) != d) throw InternalContradiction("character table: basis lost rank");
      MatP R(d, std::vector<i64>(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) R[i][j] = aug[i][d + j];
      auto cp = charpoly_mod(R, P);
      for (i64 lam = 0; lam < P; ++lam) {
        i64 v = 0;
        for (int t = d; t >= 0; --t) v = (v * lam + cp[t]) % P;
        if (v) continue;
        MatP S = R;
        for (int i = 0; i < d; ++i) S[i][i] = md(S[i][i] - lam, P);
        MatP Kc = kernel_mod(S, P);
        next.push_back(matmul(V, Kc, P));
      }
    }
    spaces = std::move(next);
  }
  for (const auto& V : spaces)
    if (V[0].size() != 1) throw InternalContradiction("character table: eigenspaces did not split");
  if (static_cast<int>(spaces.size()) != r) throw InternalContradiction("character table: wrong number of characters");

  std::vector<int> star(r);
  for (int u = 0; u < r; ++u) star[u] = T.class_of_[G.inv(T.classes_[u][0])];
  for (const auto& V : spaces) {
    std::vector<i64> w(r);
    i64 iv = inv(V[id][0], P);
    for (int u = 0; u < r; ++u) w[u] = V[u][0] * iv % P;
    i64 S = 0;
    for (int u = 0; u < r; ++u)
      S = (S + w[u] * w[star[u]] % P * inv(static_cast<i64>(T.classes_[u].size()), P)) % P;
    i64 d2 = static_cast<i64>(n) % P * inv(S, P) % P;
    int deg = 0;
    for (int d = 1; d * d <= n; ++d)
      if (static_cast<i64>(d) * d % P == d2) deg = d;
    if (!deg) throw InternalContradiction("character table: degree not found");
    std::vector<i64> val(r);
    for (int u = 0; u < r; ++u) val[u] = deg * w[u] % P * inv(static_cast<i64>(T.classes_[u].size()), P) % P;
    Character chi;
    chi.degree = deg;
    chi.mult.assign(r, std::vector<int>(e, 0));
    i64 inv_e = inv(e, P);
    for (int u = 0; u < r; ++u) {
      int g = T.classes_[u][0];
      std::vector<i64> vals(e);
      for (int j = 0; j < e; ++j) vals[j] = val[T.class_of_[G.pow(g, j)]];
      int total = 0;
      for (int k = 0; k < e; ++k) {
        i64 acc = 0;
        for (int j = 0; j < e; ++j) acc = (acc + vals[j] * pw(Z, md(-static_cast<i64>(j) * k, e), P)) % P;
        acc = acc * inv_e % P;
        if (acc > deg) throw InternalContradiction("character table: eigenvalue count out of range");
        chi.mult[u][k] = static_cast<int>(acc);
        total += static_cast<int>(acc);
      }
      if (total != deg) throw InternalContradiction("character table: eigenvalue counts do not sum to the degree");
    }
    T.chars_.push_back(std::move(chi));
  }
  std::sort(T.chars_.begin(), T.chars_.end(), [&](const Character& a, const Character& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return b.mult < a.mult;  // trivial character first
  });
  return T;
}

Character CharacterTable::twist(const Character& chi, long b) const {
  Character out = chi;
  const long e = e_;
  for (size_t u = 0; u < chi.mult.size(); ++u) {
    std::fill(out.mult[u].begin(), out.mult[u].end(), 0);
    for (long k = 0; k < e; ++k) out.mult[u][((b * k) % e + e) % e] += chi.mult[u][k];
  }
  return out;
}

int CharacterTable::index_of(const Character& chi) const {
  for (size_t i = 0; i < chars_.size(); ++i)
    if (chars_[i] == chi) return static_cast<int>(i);
  throw InternalContradiction("character not found in the table");
}

// ---------------------------------------------------------------- eigenvalues

std::vector<Eigenvalue> eigen_multiplicities_from_traces(const std::vector<Padic>& traces0, int n) {
  const long m = static_cast<long>(traces0.size());
  if (m < 1) throw ValidationError("eigen_multiplicities: empty trace list");
  FieldPtr K;
  for (const auto& t : traces0)
    if (t.field()) K = t.field();
  std::vector<Padic> traces = traces0;
  if (!K) {
    // Rational traces: work in Q_p for a prime p = 1 mod m.
    long p = m + 1;
    while (!is_prime(p)) p += m;
    K = LocalField::unramified(p, 1, 40);
  } else if (!K->is_unramified()) {
    FieldPtr B = K->base();
    for (auto& t : traces) {
      if (!in_subfield(t, B))
        throw FieldIncompatibility("eigen_multiplicities: traces do not lie in the unramified subfield");
      t = restrict_to(t, B);
    }
    K = B;
  }
  const long p = K->p();
  auto [pa, dp] = split_p(m, p);
  if ((K->q() - 1) % dp != 0) {
    // Pass to the unramified level containing the prime-to-p roots of unity.
    int f2 = K->f();
    while ((ipow(p, static_cast<unsigned long>(f2)) - 1) % dp != 0) f2 += K->f();
    FieldPtr K2 = LocalField::unramified(p, f2, K->precision());
    for (auto& t : traces) t = lift_unramified(t.realize(K), K2);
    K = K2;
  }
  for (auto& t : traces) t = t.realize(K);
  Padic zeta = K->root_of_unity(dp);
  Padic zinv = zeta.inverse();
  std::vector<Eigenvalue> out;
  int total = 0;
  for (long pc = 1; pc <= pa; pc *= p) {
    const long cls = euler_phi(pc);
    for (long k2 = 0; k2 < dp; ++k2) {
      Padic acc = Padic::exact_zero(K);
      Padic step = zinv.pow(k2);
      Padic z = K->one();
      for (long j = 0; j < m; ++j) {
        long c = ramanujan(pc, j);
        if (c) acc += traces[j] * z * Padic(K, Rational(c));
        z = z * step;
      }
      acc = acc / Padic(K, Rational(m * cls));
      int mult = certify_integer(acc, n, "eigen_multiplicities");
      if (!mult) continue;
      long order = pc * (dp / std::gcd(dp, k2 == 0 ? dp : k2));
      for (long i = 0; i < cls; ++i) out.push_back({order, mult});
      total += static_cast<int>(cls) * mult;
    }
  }
  if (total != n) throw InternalContradiction("eigen_multiplicities: multiplicities do not sum to the dimension");
  std::sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    return std::tie(a.order, a.multiplicity) < std::tie(b.order, b.multiplicity);
  });
  return out;
}

std::vector<Eigenvalue> eigen_multiplicities(const PMat& h, long m) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n || n == 0) throw ValidationError("eigen_multiplicities: matrix must be square");
  if (m < 1) throw ValidationError("eigen_multiplicities: order must be positive");
  FieldPtr K = field_of(h);
  if (!K) throw ValidationError("eigen_multiplicities: matrix has no field");
  PMat H = realize(h, K);
  std::vector<Padic> tr;
  PMat cur = identity(n, K);
  for (long j = 0; j < m; ++j) {
    tr.push_back(trace(cur));
    cur = (cur * H).eval();
  }
  if (!is_zero(PMat(cur - identity(n, K)))) throw ValidationError("eigen_multiplicities: h^m is not the identity");
  return eigen_multiplicities_from_traces(tr, n);
}

std::vector<Eigenvalue> eigen_multiplicities(const QMat& h, long m) {
  long p = m + 1;
  while (!is_prime(p)) p += m;
  return eigen_multiplicities(to_field(h, LocalField::unramified(p, 1, 40)), m);
}

namespace {

PerturbateurWitness witness_from(std::vector<Eigenvalue> ev, int n) {
  PerturbateurWitness w;
  w.eigenvalues = std::move(ev);
  w.perturbateur = true;
  for (const auto& x : w.eigenvalues) w.perturbateur = w.perturbateur && 2 * x.multiplicity <= n;
  return w;
}

}  // namespace

PerturbateurWitness perturbateur_check(const PMat& h, long m) {
  return witness_from(eigen_multiplicities(h, m), static_cast<int>(h.rows()));
}

bool is_perturbateur(const Character& chi, int cls) {
  for (int c : chi.mult[cls])
    if (2 * c > chi.degree) return false;
  return true;
}

// ---------------------------------------------------------------- actions

GroupAction::GroupAction(FiniteGroup G, std::vector<PMat> rep, int guard) : G_(std::move(G)), rep_(std::move(rep)) {
  (void)guard;
  const int N = G_.order();
  if (static_cast<int>(rep_.size()) != N) throw ValidationError("representation must list one matrix per element");
  for (const auto& M : rep_) {
    if (!K_) K_ = field_of(M);
    if (M.rows() != rep_[0].rows() || M.cols() != rep_[0].rows()) throw ValidationError("representation matrices differ in size");
  }
  if (!K_) throw ValidationError("representation has no field");
  for (auto& M : rep_) M = realize(M, K_);
  const int n = dim();
  if (!is_zero(PMat(rep_[0] - identity(n, K_)))) throw ValidationError("identity does not act trivially");
  for (int s : G_.generators())
    for (int h = 0; h < N; ++h)
      if (!is_zero(PMat(rep_[s] * rep_[h] - rep_[G_.mul(s, h)])))
        throw ValidationError("representation violates the multiplication table at " + G_.name(s) + "*" +
                              G_.name(h));
}

GroupAction GroupAction::from_generators(const FiniteGroup& G, const std::vector<std::pair<int, PMat>>& gens,
                                         int guard) {
  if (gens.empty()) throw ValidationError("no generator images given");
  FieldPtr K;
  for (const auto& [g, M] : gens)
    if (!K) K = field_of(M);
  if (!K) throw ValidationError("generator images have no field");
  const int n = static_cast<int>(gens[0].second.rows());
  std::vector<PMat> rep(G.order());
  std::vector<bool> seen(G.order(), false);
  rep[0] = identity(n, K);
  seen[0] = true;
  std::vector<int> queue{0};
  for (size_t i = 0; i < queue.size(); ++i) {
    int x = queue[i];
    for (const auto& [s, M] : gens) {
      int y = G.mul(x, s);
      if (seen[y]) continue;
      seen[y] = true;
      rep[y] = rep[x] * realize(M, K);
      queue.push_back(y);
    }
  }
  if (static_cast<int>(queue.size()) != G.order()) throw ValidationError("listed elements do not generate the group");
  return GroupAction(G, std::move(rep), guard);
}

bool GroupAction::is_faithful() const {
  const int n = dim();
  for (int g = 1; g < G_.order(); ++g)
    if (is_zero(PMat(rep_[g] - identity(n, K_)))) return false;
  return true;
}

bool GroupAction::is_scalar() const {
  const int n = dim();
  for (const auto& M : rep_)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i != j && !M(i, j).is_zero()) return false;
        if (i == j && !(M(i, i) - M(0, 0)).is_zero()) return false;
      }
  return true;
}

void GroupAction::check_phi_compatible(const PhiModule& D) const {
  if (D.dim() != dim()) throw ValidationError("action and phi-module differ in dimension");
  const PMat& A = D.matrix();
  for (int s : G_.generators())
    if (!is_zero(PMat(rep_[s] * A - A * frobenius(rep_[s]))))
      throw ValidationError("element " + G_.name(s) + " does not commute with Frobenius");
}

void GroupAction::check_symplectic(const PMat& J) const {
  for (int s : G_.generators())
    if (!is_zero(PMat(rep_[s].transpose() * J * rep_[s] - J)))
      throw ValidationError("element " + G_.name(s) + " does not preserve the polarization");
}

std::vector<Padic> GroupAction::traces(int g) const {
  std::vector<Padic> out;
  for (int j = 0; j < G_.element_order(g); ++j) out.push_back(trace(rep_[G_.pow(g, j)]));
  return out;
}

GroupAction GroupAction::direct_sum(const GroupAction& o) const {
  std::vector<PMat> rep;
  for (int g = 0; g < G_.order(); ++g) rep.push_back(block_diagonal<Padic>({rep_[g], realize(o.rep_[g], K_)}));
  return GroupAction(G_, std::move(rep));
}

GroupAction GroupAction::dual() const {
  std::vector<PMat> rep;
  for (int g = 0; g < G_.order(); ++g) rep.push_back(rep_[G_.inv(g)].transpose());
  return GroupAction(G_, std::move(rep));
}

GroupAction GroupAction::frobenius_twist() const {
  std::vector<PMat> rep;
  for (const auto& M : rep_) rep.push_back(frobenius(M));
  return GroupAction(G_, std::move(rep));
}

GroupAction GroupAction::restrict(const PMat& W, int guard) const {
  PMat Wl = left_inverse(W, guard);
  std::vector<PMat> rep;
  for (int g = 0; g < G_.order(); ++g) {
    PMat img = rep_[g] * W;
    if (!contains(W, img, guard)) throw ValidationError("subspace is not stable under " + G_.name(g));
    rep.push_back(Wl * img);
  }
  return GroupAction(G_, std::move(rep));
}

PerturbateurWitness perturbateur_check(const GroupAction& V, int g) {
  PerturbateurWitness w = witness_from(eigen_multiplicities_from_traces(V.traces(g), V.dim()), V.dim());
  w.element = g;
  return w;
}

PerturbateurSearch find_perturbateur(const GroupAction& V) {
  PerturbateurSearch out;
  for (int g = 0; g < V.group().order(); ++g) {
    PerturbateurWitness w = perturbateur_check(V, g);
    if (w.perturbateur) {
      out.element = g;
      out.witness = std::move(w);
      return out;
    }
  }
  if (V.is_scalar()) {
    out.homothety = true;
    return out;
  }
  throw InternalContradiction("no perturbateur element and the action is not by homotheties");
}

// ---------------------------------------------------------------- isotypic parts

namespace {

struct Orbits {
  std::vector<std::vector<int>> orbits;
  std::vector<int> orbit_of;
};

Orbits galois_orbits(const CharacterTable& T, const std::vector<long>& gamma) {
  Orbits O;
  O.orbit_of.assign(T.size(), -1);
  for (int i = 0; i < T.size(); ++i) {
    if (O.orbit_of[i] >= 0) continue;
    std::set<int> orb;
    for (long b : gamma) orb.insert(T.galois_image(i, b));
    for (int j : orb) O.orbit_of[j] = static_cast<int>(O.orbits.size());
    O.orbits.emplace_back(orb.begin(), orb.end());
  }
  return O;
}

// Units b mod e with b mod e' in the subgroup generated by `gen`.
std::vector<long> galois_group(long e, long ep, long gen) {
  std::set<long> sub;
  long x = 1 % ep;
  do {
    sub.insert(x);
    x = (x * (gen % ep)) % ep;
  } while (x != 1 % ep);
  std::vector<long> out;
  for (long b = 1; b <= e; ++b)
    if (std::gcd(b, e) == 1 && sub.count(b % ep)) out.push_back(b % e);
  return out;
}

}  // namespace

std::vector<IsotypicComponent> isotypic_decomposition(const GroupAction& V, const CharacterTable& T) {
  const FiniteGroup& G = V.group();
  if (G.order() != T.group_order()) throw ValidationError("character table belongs to another group");
  const FieldPtr& K = V.field();
  const long p = K->p();
  const long e = T.exponent();
  auto [pa, ep] = split_p(e, p);
  if ((K->q() - 1) % ep != 0)
    throw FieldIncompatibility("isotypic projectors need roots of unity of order " + std::to_string(ep) +
                               ", absent from " + K->describe());
  Orbits O = galois_orbits(T, galois_group(e, ep, 1));
  Padic zeta = K->root_of_unity(ep);
  std::vector<Padic> zp;
  for (long k = 0; k < ep; ++k) zp.push_back(zeta.pow(k));
  std::vector<long> ram(e);
  for (long k = 0; k < e; ++k) ram[k] = ramanujan(pa, k);
  const long gamma_size = euler_phi(pa);
  const int n = V.dim();
  std::vector<IsotypicComponent> out;
  PMat sum = PMat::Constant(n, n, Padic::exact_zero(K));
  for (const auto& orb : O.orbits) {
    const Character& chi = T.characters()[orb[0]];
    const long stab = gamma_size / static_cast<long>(orb.size());
    // Orbit sum of characters on each class.
    std::vector<Padic> val(T.classes().size());
    for (size_t u = 0; u < val.size(); ++u) {
      Padic acc = Padic::exact_zero(K);
      for (long k = 0; k < e; ++k) {
        int m = chi.mult[u][k];
        if (!m || !ram[k]) continue;
        acc += zp[k % ep] * Padic(K, Rational(m * ram[k]));
      }
      val[u] = acc / Padic(K, Rational(stab));
    }
    PMat E = PMat::Constant(n, n, Padic::exact_zero(K));
    for (int g = 0; g < G.order(); ++g) {
      const Padic& c = val[T.class_of()[G.inv(g)]];
      if (c.is_zero()) continue;
      E += V(g) * c;
    }
    E = (E * Padic(K, Rational(Integer(chi.degree), Integer(G.order())))).eval();
    sum += E;
    if (is_zero(E)) continue;
    IsotypicComponent comp;
    comp.characters = orb;
    comp.projector = E;
    comp.basis = column_basis(E);
    out.push_back(std::move(comp));
  }
  if (!is_zero(PMat(sum - identity(n, K)))) throw InternalContradiction("isotypic projectors do not sum to the identity");
  return out;
}

std::vector<int> conjugates_and_duals(const CharacterTable& T, int chi, long p) {
  const long e = T.exponent();
  auto [pa, ep] = split_p(e, p);
  (void)pa;
  std::set<int> reach;
  for (long b : galois_group(e, ep, p)) {
    reach.insert(T.galois_image(chi, b));
    reach.insert(T.galois_image(chi, e - b));
  }
  return {reach.begin(), reach.end()};
}

bool is_K_elementary(const GroupAction& V, const std::vector<IsotypicComponent>& comps, const CharacterTable& T) {
  if (comps.size() <= 1) return true;
  std::vector<int> reach = conjugates_and_duals(T, comps[0].characters[0], V.field()->p());
  for (const auto& c : comps) {
    if (!std::binary_search(reach.begin(), reach.end(), c.characters[0])) return false;
    if (c.basis.cols() != comps[0].basis.cols()) return false;
  }
  return true;
}

// ---------------------------------------------------------------- fixtures

GroupAction quaternion_action(const FieldPtr& Q4) {
  if (!Q4->is_unramified() || Q4->p() != 2 || Q4->f() != 2)
    throw FieldIncompatibility("the quaternion action is realized over Q_4");
  FieldPtr Q2 = Q4->prime_field();
  // s = 1 + 2x squares to -3 and sigma(s) = -s.
  Padic x = Q4->generator();
  Padic s = Q4->one() + x * Padic(Q4, Rational(2));
  Padic r15 = embed(sqrt_unit(Padic(Q2, Rational(-15))), Q4);
  // c + sigma(c) = 3 and c sigma(c) = 1.
  Padic c = (Padic(Q4, Rational(3)) + r15 / s) / Padic(Q4, Rational(2));
  Padic two(Q4, Rational(2));
  PMat k(2, 2), i(2, 2);
  k << s, two, Q4->one(), -s;
  i << s, two * c.frobenius(), c, -s;
  PMat j = -(i * k);
  FiniteGroup G = quaternion_group();
  return GroupAction::from_generators(G, {{G.index_of("i"), i}, {G.index_of("j"), j}});
}

GroupAction wreath_action(const GroupAction& V, const WreathProduct& W) {
  const int b = V.dim();
  const FieldPtr& K = V.field();
  std::vector<PMat> rep;
  for (const auto& el : W.elements) {
    const int g = static_cast<int>(el.perm.size());
    PMat M = PMat::Constant(b * g, b * g, Padic::exact_zero(K));
    for (int j = 0; j < g; ++j) M.block(el.perm[j] * b, j * b, b, b) = V(el.base[el.perm[j]]);
    rep.push_back(M);
  }
  return GroupAction(W.group, std::move(rep));
}

}  // namespace isocrys
