#include "isocrys/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "isocrys/errors.hpp"

namespace isocrys {

namespace {
long lcm_l(long a, long b) { return a / std::gcd(a, b) * b; }
}  // namespace

FiniteGroup FiniteGroup::from_raw(int n, std::vector<int> table, std::vector<std::string> names) {
  FiniteGroup G;
  G.n_ = n;
  G.table_ = std::move(table);
  G.names_ = std::move(names);
  if (G.names_.empty())
    for (int i = 0; i < n; ++i) G.names_.push_back(std::to_string(i));
  G.finish();
  return G;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::string> names, const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw ValidationError("empty group table");
  if (names.empty())
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  if (static_cast<int>(names.size()) != n) throw ValidationError("element list and table disagree in size");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw ValidationError("table is not square");
    std::vector<char> seen(n, 0);
    for (int v : row) {
      if (v < 0 || v >= n) throw ValidationError("table entry out of range");
      if (seen[v]++) throw ValidationError("table row is not a permutation");
    }
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = table[a][b] == b && table[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) throw ValidationError("no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw ValidationError("table is not associative at (" + names[a] + ", " + names[b] + ", " + names[c] + ")");
  // Move the identity to index 0.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[e]);  // new -> old
  std::vector<int> back(n);
  for (int i = 0; i < n; ++i) back[perm[i]] = i;
  FiniteGroup G;
  G.n_ = n;
  G.table_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G.table_[static_cast<std::size_t>(a) * n + b] = back[table[perm[a]][perm[b]]];
  for (int i = 0; i < n; ++i) G.names_.push_back(names[perm[i]]);
  G.finish();
  return G;
}

void FiniteGroup::finish() {
  inv_.assign(n_, -1);
  ord_.assign(n_, 0);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == 0) {
        inv_[a] = b;
        break;
      }
    int k = 1, x = a;
    while (x != 0) {
      x = mul(x, a);
      ++k;
    }
    ord_[a] = k;
  }
  if (gens_.empty()) {
    // Greedy generating set.
    std::vector<char> in(n_, 0);
    in[0] = 1;
    int size = 1;
    std::vector<int> elems{0};
    for (int g = 1; g < n_ && size < n_; ++g) {
      if (in[g]) continue;
      gens_.push_back(g);
      for (std::size_t i = 0; i < elems.size(); ++i) {
        for (int s : gens_) {
          int h = mul(elems[i], s);
          if (!in[h]) {
            in[h] = 1;
            elems.push_back(h);
            ++size;
          }
        }
      }
    }
  }
}

int FiniteGroup::pow(int a, long k) const {
  long o = ord_[a];
  k %= o;
  if (k < 0) k += o;
  int r = 0;
  for (long i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

int FiniteGroup::exponent() const {
  long e = 1;
  for (int a = 0; a < n_; ++a) e = lcm_l(e, ord_[a]);
  return static_cast<int>(e);
}

int FiniteGroup::index_of(const std::string& s) const {
  for (int i = 0; i < n_; ++i)
    if (names_[i] == s) return i;
  throw ValidationError("unknown group element '" + s + "'");
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) t[a][b] = mul(a, b);
  return t;
}

std::vector<std::vector<int>> FiniteGroup::conjugacy_classes() const {
  std::vector<int> cls(n_, -1);
  std::vector<std::vector<int>> out;
  for (int x = 0; x < n_; ++x) {
    if (cls[x] >= 0) continue;
    std::vector<int> c;
    for (int g = 0; g < n_; ++g) {
      int y = conj(g, x);
      if (cls[y] < 0) {
        cls[y] = static_cast<int>(out.size());
        c.push_back(y);
      }
    }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> FiniteGroup::class_of() const {
  std::vector<int> cls(n_);
  auto cc = conjugacy_classes();
  for (std::size_t i = 0; i < cc.size(); ++i)
    for (int x : cc[i]) cls[x] = static_cast<int>(i);
  return cls;
}

std::vector<int> FiniteGroup::center() const {
  std::vector<int> z;
  for (int x = 0; x < n_; ++x) {
    bool c = true;
    for (int g = 0; g < n_ && c; ++g) c = mul(g, x) == mul(x, g);
    if (c) z.push_back(x);
  }
  return z;
}

bool FiniteGroup::is_abelian() const { return static_cast<int>(center().size()) == n_; }

namespace {

std::vector<int> closure(const FiniteGroup& G, const std::vector<int>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<int> elems{0};
  in[0] = 1;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (int s : gens) {
      int h = G.mul(elems[i], s);
      if (!in[h]) {
        in[h] = 1;
        elems.push_back(h);
      }
    }
  return elems;
}

}  // namespace

int FiniteGroup::derived_subgroup_order() const {
  std::set<int> comm;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) comm.insert(mul(mul(a, b), mul(inv(a), inv(b))));
  return static_cast<int>(closure(*this, std::vector<int>(comm.begin(), comm.end())).size());
}

long FiniteGroup::prime_power_base() const {
  if (n_ == 1) return 1;
  long n = n_, p = 2;
  while (n % p != 0) ++p;
  while (n % p == 0) n /= p;
  return n == 1 ? p : 0;
}

FiniteGroup metacyclic(int m, int n, int r, int s) {
  auto md = [](long a, long b) { return static_cast<int>(((a % b) + b) % b); };
  std::vector<long> rp(n + 1, 1);
  for (int j = 1; j <= n; ++j) rp[j] = md(rp[j - 1] * r, m);
  if (rp[n] % m != 1 % m || md(static_cast<long>(r) * s - s, m) != 0)
    throw ValidationError("inconsistent metacyclic parameters");
  const int N = m * n;
  std::vector<std::vector<int>> t(N, std::vector<int>(N));
  std::vector<std::string> names(N);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      std::string nm;
      if (i == 0 && j == 0) nm = "1";
      if (i > 0) nm += (i == 1 ? std::string("a") : "a^" + std::to_string(i));
      if (j > 0) nm += (j == 1 ? std::string("x") : "x^" + std::to_string(j));
      names[i * n + j] = nm;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l) {
          long a = i + rp[j] * k;
          int jj = j + l;
          if (jj >= n) {
            jj -= n;
            a += s;
          }
          t[i * n + j][k * n + l] = md(a, m) * n + jj;
        }
    }
  FiniteGroup G = FiniteGroup::from_table(names, t);
  std::vector<int> gens;
  if (m > 1) gens.push_back(1 * n);
  if (n > 1) gens.push_back(1);
  G.set_generators(gens);
  return G;
}

FiniteGroup cyclic(int n) { return metacyclic(n, 1, 1, 0); }
FiniteGroup dihedral(int order) { return metacyclic(order / 2, 2, order / 2 - 1, 0); }
FiniteGroup dicyclic(int order) { return metacyclic(order / 2, 2, order / 2 - 1, order / 4); }

FiniteGroup symmetric(int k) {
  std::vector<int> id(k);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> gens;
  if (k >= 2) {
    std::vector<int> t = id;
    std::swap(t[0], t[1]);
    gens.push_back(t);
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = (i + 1) % k;
    if (k > 2) gens.push_back(c);
  }
  auto mul = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
  };
  auto name = [](const std::vector<int>& a) {
    std::string s = "[";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "]";
  };
  return FiniteGroup::generate(id, gens, mul, name);
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order(), N = na * nb;
  std::vector<std::vector<int>> t(N, std::vector<int>(N));
  std::vector<std::string> names(N);
  for (int x = 0; x < N; ++x) {
    names[x] = "(" + a.name(x / nb) + "," + b.name(x % nb) + ")";
    for (int y = 0; y < N; ++y) t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  }
  FiniteGroup G = FiniteGroup::from_table(names, t);
  std::vector<int> gens;
  for (int g : a.generators()) gens.push_back(g * nb);
  for (int g : b.generators()) gens.push_back(g);
  G.set_generators(gens);
  return G;
}

FiniteGroup semidirect(const FiniteGroup& N, const FiniteGroup& H, const std::vector<std::vector<int>>& act) {
  const int nn = N.order(), nh = H.order(), M = nn * nh;
  if (static_cast<int>(act.size()) != nh) throw ValidationError("action table has wrong size");
  for (int h = 0; h < nh; ++h) {
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        if (act[h][N.mul(a, b)] != N.mul(act[h][a], act[h][b]))
          throw ValidationError("action is not by automorphisms");
    for (int k = 0; k < nh; ++k)
      for (int a = 0; a < nn; ++a)
        if (act[H.mul(h, k)][a] != act[h][act[k][a]]) throw ValidationError("action is not a homomorphism");
  }
  std::vector<std::vector<int>> t(M, std::vector<int>(M));
  std::vector<std::string> names(M);
  for (int x = 0; x < M; ++x) {
    int n1 = x / nh, h1 = x % nh;
    names[x] = "(" + N.name(n1) + "," + H.name(h1) + ")";
    for (int y = 0; y < M; ++y) {
      int n2 = y / nh, h2 = y % nh;
      t[x][y] = N.mul(n1, act[h1][n2]) * nh + H.mul(h1, h2);
    }
  }
  FiniteGroup G = FiniteGroup::from_table(names, t);
  std::vector<int> gens;
  for (int g : N.generators()) gens.push_back(g * nh);
  for (int g : H.generators()) gens.push_back(g);
  G.set_generators(gens);
  return G;
}

WreathElement wreath_mul(const FiniteGroup& B, const WreathElement& x, const WreathElement& y) {
  const std::size_t g = x.perm.size();
  WreathElement r;
  r.base.resize(g);
  r.perm.resize(g);
  // (a, pi)(b, tau) = (a * pi(b), pi tau), pi(b)_{pi(j)} = b_j
  for (std::size_t j = 0; j < g; ++j) {
    r.base[x.perm[j]] = B.mul(x.base[x.perm[j]], y.base[j]);
    r.perm[j] = x.perm[y.perm[j]];
  }
  return r;
}

WreathProduct wreath_with_symmetric(const FiniteGroup& B, int g) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(g);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const int np = static_cast<int>(perms.size());
  std::map<std::vector<int>, int> pidx;
  for (int i = 0; i < np; ++i) pidx[perms[i]] = i;
  std::vector<int> pmul(np * np);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b) {
      std::vector<int> r(g);
      for (int j = 0; j < g; ++j) r[j] = perms[a][perms[b][j]];
      pmul[a * np + b] = pidx[r];
    }
  const int nb = B.order();
  int nbase = 1;
  for (int i = 0; i < g; ++i) nbase *= nb;
  const int N = nbase * np;
  WreathProduct W;
  W.elements.resize(N);
  std::vector<std::vector<int>> digits(nbase, std::vector<int>(g));
  for (int c = 0; c < nbase; ++c) {
    int v = c;
    for (int i = 0; i < g; ++i) {
      digits[c][i] = v % nb;
      v /= nb;
    }
  }
  auto encode = [&](const std::vector<int>& d) {
    int c = 0;
    for (int i = g - 1; i >= 0; --i) c = c * nb + d[i];
    return c;
  };
  std::vector<std::string> names(N);
  for (int x = 0; x < N; ++x) {
    W.elements[x] = {digits[x / np], perms[x % np]};
    std::string s = "(";
    for (int i = 0; i < g; ++i) s += (i ? "," : "") + B.name(digits[x / np][i]);
    s += ";";
    for (int i = 0; i < g; ++i) s += (i ? "," : "") + std::to_string(perms[x % np][i]);
    names[x] = s + ")";
  }
  // Build the table directly; associativity holds by construction.
  std::vector<int> tab(static_cast<std::size_t>(N) * N);
  std::vector<int> d(g);
  for (int x = 0; x < N; ++x) {
    const auto& a = digits[x / np];
    const auto& pi = perms[x % np];
    for (int y = 0; y < N; ++y) {
      const auto& b = digits[y / np];
      for (int j = 0; j < g; ++j) d[pi[j]] = B.mul(a[pi[j]], b[j]);
      tab[static_cast<std::size_t>(x) * N + y] = encode(d) * np + pmul[(x % np) * np + y % np];
    }
  }
  W.group = FiniteGroup::from_raw(N, std::move(tab), std::move(names));
  std::vector<int> gens;
  for (int s : B.generators()) {
    std::vector<int> e(g, 0);
    e[0] = s;
    gens.push_back(encode(e) * np);
  }
  if (g >= 2) {
    std::vector<int> t(g), c(g);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[0], t[1]);
    for (int i = 0; i < g; ++i) c[i] = (i + 1) % g;
    gens.push_back(pidx[t]);
    if (g > 2) gens.push_back(pidx[c]);
  }
  W.group.set_generators(gens);
  return W;
}

Subgroup subgroup_generated(const FiniteGroup& G, const std::vector<int>& gens) {
  std::vector<int> elems = closure(G, gens);
  std::sort(elems.begin(), elems.end());
  std::map<int, int> pos;
  for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
  const int n = static_cast<int>(elems.size());
  std::vector<int> tab(static_cast<std::size_t>(n) * n);
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    names.push_back(G.name(elems[a]));
    for (int b = 0; b < n; ++b) tab[static_cast<std::size_t>(a) * n + b] = pos.at(G.mul(elems[a], elems[b]));
  }
  Subgroup S{FiniteGroup::from_raw(n, std::move(tab), std::move(names)), elems};
  std::vector<int> sg;
  for (int g : gens) sg.push_back(pos.at(g));
  S.group.set_generators(sg);
  return S;
}

Subgroup sylow_subgroup(const FiniteGroup& G, long p) {
  std::vector<int> gens;
  std::vector<int> P{0};
  std::vector<char> inP(G.order(), 0);
  inP[0] = 1;
  for (;;) {
    int found = -1;
    for (int g = 0; g < G.order() && found < 0; ++g) {
      if (inP[g]) continue;
      // p-part of g
      int o = G.element_order(g), m = o;
      while (m % p == 0) m /= p;
      int h = G.pow(g, m);
      if (inP[h]) continue;
      bool normalizes = true;
      for (int x : P)
        if (!inP[G.conj(h, x)]) {
          normalizes = false;
          break;
        }
      if (!normalizes) continue;
      // step down to an element of order p modulo P
      while (!inP[G.pow(h, p)]) h = G.pow(h, p);
      found = h;
    }
    if (found < 0) break;
    gens.push_back(found);
    P = closure(G, gens);
    std::fill(inP.begin(), inP.end(), 0);
    for (int x : P) inP[x] = 1;
  }
  return subgroup_generated(G, gens);
}

FiniteGroup quaternion_group() {
  // (sign, unit) with units 1, i, j, k
  static const int prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  using Q = std::pair<int, int>;
  auto mul = [](const Q& a, const Q& b) { return Q{a.first * b.first * sgn[a.second][b.second], prod[a.second][b.second]}; };
  auto name = [](const Q& a) {
    static const char* u[4] = {"1", "i", "j", "k"};
    return std::string(a.first < 0 ? "-" : "") + u[a.second];
  };
  return FiniteGroup::generate(Q{1, 0}, {Q{1, 1}, Q{1, 2}}, mul, name);
}

namespace {

FiniteGroup alternating4() {
  auto mul = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
  };
  auto name = [](const std::vector<int>& a) {
    std::string s = "[";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "]";
  };
  return FiniteGroup::generate(std::vector<int>{0, 1, 2, 3}, {{1, 2, 0, 3}, {1, 0, 3, 2}}, mul, name);
}

// Action table of H on N from images of H's generators given as maps on N.
std::vector<std::vector<int>> action_from_generators(const FiniteGroup& N, const FiniteGroup& H,
                                                     const std::vector<std::vector<int>>& gen_images) {
  std::vector<std::vector<int>> act(H.order());
  std::vector<int> id(N.order());
  std::iota(id.begin(), id.end(), 0);
  act[0] = id;
  std::vector<int> elems{0};
  std::vector<char> done(H.order(), 0);
  done[0] = 1;
  const auto& hg = H.generators();
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t s = 0; s < hg.size(); ++s) {
      int h = H.mul(elems[i], hg[s]);
      if (done[h]) continue;
      done[h] = 1;
      std::vector<int> m(N.order());
      for (int a = 0; a < N.order(); ++a) m[a] = act[elems[i]][gen_images[s][a]];
      act[h] = m;
      elems.push_back(h);
    }
  return act;
}

// Semidirect product of an abelian group Z/m1 x Z/m2 (x Z/m3) by a cyclic group
// whose generator acts through an integer matrix on the coordinates.
FiniteGroup abelian_by_cyclic(const std::vector<int>& mods, int n, const std::vector<std::vector<int>>& mat) {
  FiniteGroup N = cyclic(mods[0]);
  for (std::size_t i = 1; i < mods.size(); ++i) N = direct_product(N, cyclic(mods[i]));
  FiniteGroup H = cyclic(n);
  const int k = static_cast<int>(mods.size());
  auto coords = [&](int idx) {
    std::vector<int> c(k);
    for (int i = k - 1; i >= 0; --i) {
      c[i] = idx % mods[i];
      idx /= mods[i];
    }
    return c;
  };
  auto index = [&](const std::vector<int>& c) {
    int idx = 0;
    for (int i = 0; i < k; ++i) idx = idx * mods[i] + ((c[i] % mods[i]) + mods[i]) % mods[i];
    return idx;
  };
  std::vector<int> img(N.order());
  for (int a = 0; a < N.order(); ++a) {
    auto c = coords(a);
    std::vector<int> d(k, 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) d[i] += mat[i][j] * c[j];
    img[a] = index(d);
  }
  return semidirect(N, H, action_from_generators(N, H, {img}));
}

}  // namespace

std::vector<NamedGroup> small_groups() {
  std::vector<NamedGroup> out;
  auto C = [](int n) { return cyclic(n); };
  auto X = [](const FiniteGroup& a, const FiniteGroup& b) { return direct_product(a, b); };
  FiniteGroup Q8 = quaternion_group();
  FiniteGroup D8 = dihedral(8);
  out.push_back({"C1", C(1)});
  out.push_back({"C2", C(2)});
  out.push_back({"C3", C(3)});
  out.push_back({"C4", C(4)});
  out.push_back({"C2xC2", X(C(2), C(2))});
  out.push_back({"C5", C(5)});
  out.push_back({"C6", C(6)});
  out.push_back({"S3", dihedral(6)});
  out.push_back({"C7", C(7)});
  out.push_back({"C8", C(8)});
  out.push_back({"C4xC2", X(C(4), C(2))});
  out.push_back({"C2^3", X(X(C(2), C(2)), C(2))});
  out.push_back({"D8", D8});
  out.push_back({"Q8", Q8});
  out.push_back({"C9", C(9)});
  out.push_back({"C3xC3", X(C(3), C(3))});
  out.push_back({"C10", C(10)});
  out.push_back({"D10", dihedral(10)});
  out.push_back({"C11", C(11)});
  out.push_back({"C12", C(12)});
  out.push_back({"C6xC2", X(C(6), C(2))});
  out.push_back({"D12", dihedral(12)});
  out.push_back({"A4", alternating4()});
  out.push_back({"Dic12", dicyclic(12)});
  out.push_back({"C13", C(13)});
  out.push_back({"C14", C(14)});
  out.push_back({"D14", dihedral(14)});
  out.push_back({"C15", C(15)});
  out.push_back({"C16", C(16)});
  out.push_back({"C4xC4", X(C(4), C(4))});
  out.push_back({"(C4xC2):C2", abelian_by_cyclic({4, 2}, 2, {{1, 0}, {1, 1}})});
  out.push_back({"C4:C4", metacyclic(4, 4, 3, 0)});
  out.push_back({"C8xC2", X(C(8), C(2))});
  out.push_back({"M16", metacyclic(8, 2, 5, 0)});
  out.push_back({"D16", dihedral(16)});
  out.push_back({"SD16", metacyclic(8, 2, 3, 0)});
  out.push_back({"Q16", dicyclic(16)});
  out.push_back({"C4xC2xC2", X(X(C(4), C(2)), C(2))});
  out.push_back({"C2xD8", X(C(2), D8)});
  out.push_back({"C2xQ8", X(C(2), Q8)});
  out.push_back({"C4oD8", abelian_by_cyclic({4, 2}, 2, {{1, 2}, {0, 1}})});
  out.push_back({"C2^4", X(X(C(2), C(2)), X(C(2), C(2)))});
  return out;
}

std::vector<NamedGroup> p_group_fixtures() {
  std::vector<NamedGroup> out;
  for (auto& g : small_groups())
    if (g.group.order() > 1 && g.group.prime_power_base() > 1) out.push_back(std::move(g));
  auto C = [](int n) { return cyclic(n); };
  auto X = [](const FiniteGroup& a, const FiniteGroup& b) { return direct_product(a, b); };
  FiniteGroup Q8 = quaternion_group(), D8 = dihedral(8);
  out.push_back({"C25", C(25)});
  out.push_back({"C5xC5", X(C(5), C(5))});
  out.push_back({"C27", C(27)});
  out.push_back({"C9xC3", X(C(9), C(3))});
  out.push_back({"C3^3", X(X(C(3), C(3)), C(3))});
  out.push_back({"Heis27", abelian_by_cyclic({3, 3}, 3, {{1, 0}, {1, 1}})});
  out.push_back({"C9:C3", metacyclic(9, 3, 4, 0)});
  out.push_back({"C32", C(32)});
  out.push_back({"C16xC2", X(C(16), C(2))});
  out.push_back({"C8xC4", X(C(8), C(4))});
  out.push_back({"C2^5", X(X(X(C(2), C(2)), X(C(2), C(2))), C(2))});
  out.push_back({"D32", dihedral(32)});
  out.push_back({"SD32", metacyclic(16, 2, 7, 0)});
  out.push_back({"Q32", dicyclic(32)});
  out.push_back({"M32", metacyclic(16, 2, 9, 0)});
  out.push_back({"C4xD8", X(C(4), D8)});
  out.push_back({"C4xQ8", X(C(4), Q8)});
  out.push_back({"C2xC2xQ8", X(X(C(2), C(2)), Q8)});
  out.push_back({"C4wrC2", abelian_by_cyclic({4, 4}, 2, {{0, 1}, {1, 0}})});
  out.push_back({"C49", C(49)});
  out.push_back({"C7xC7", X(C(7), C(7))});
  out.push_back({"C64", C(64)});
  out.push_back({"C8xC8", X(C(8), C(8))});
  out.push_back({"C4^3", X(X(C(4), C(4)), C(4))});
  out.push_back({"Q8xQ8", X(Q8, Q8)});
  out.push_back({"D8xD8", X(D8, D8)});
  out.push_back({"Q8xD8", X(Q8, D8)});
  out.push_back({"D64", dihedral(64)});
  out.push_back({"Q64", dicyclic(64)});
  out.push_back({"Q8xC8", X(Q8, C(8))});
  return out;
}

std::string group_signature(const FiniteGroup& G) {
  const int n = G.order();
  std::map<std::pair<int, int>, int> hist;  // (element order, centralizer size)
  for (int x = 0; x < n; ++x) {
    int c = 0;
    for (int g = 0; g < n; ++g) c += G.mul(g, x) == G.mul(x, g);
    hist[{G.element_order(x), c}]++;
  }
  std::set<int> squares;
  for (int x = 0; x < n; ++x) squares.insert(G.mul(x, x));
  std::ostringstream os;
  os << n << "|z" << G.center().size() << "|d" << G.derived_subgroup_order() << "|k"
     << G.conjugacy_classes().size() << "|s" << squares.size() << "|";
  for (const auto& [k, v] : hist) os << k.first << "," << k.second << ":" << v << ";";
  return os.str();
}

}  // namespace isocrys
