#include "isocrys/io.hpp"

#include <fstream>
#include <sstream>

#include "isocrys/bounds.hpp"
#include "isocrys/errors.hpp"

namespace isocrys::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError((where.empty() ? std::string("/") : where) + ": " + what);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing key \"" + key + "\"");
  return *it;
}

long get_long(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

Rational get_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(where, std::string("bad rational: ") + e.what());
    }
  }
  fail(where, "expected an integer or a string \"a/b\"");
}

BaseCoords get_coords(const json& j, const std::string& where) {
  if (!j.is_array()) return {get_rational(j, where)};
  BaseCoords out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_rational(j[i], at(where, i)));
  return out;
}

std::vector<std::vector<BaseCoords>> get_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of rows");
  std::vector<std::vector<BaseCoords>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) fail(at(where, i), "expected a row");
    std::vector<BaseCoords> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(get_coords(j[i][k], at(at(where, i), k)));
    if (!rows.empty() && row.size() != rows[0].size()) fail(at(where, i), "rows have different lengths");
    rows.push_back(std::move(row));
  }
  return rows;
}

PMat to_matrix(const FieldPtr& K, const std::vector<std::vector<BaseCoords>>& rows, const std::string& where) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size());
  PMat M(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k) {
      const BaseCoords& c = rows[i][k];
      if (static_cast<int>(c.size()) > K->f()) fail(at(at(where, i), k), "more coordinates than the residue degree");
      try {
        M(i, k) = Padic::from_coords(K, {c});
      } catch (const ValidationError& e) {
        fail(at(at(where, i), k), e.what());
      }
    }
  return M;
}

PMat square(const FieldPtr& K, const json& j, int n, const std::string& where) {
  PMat M = to_matrix(K, get_matrix(j, where), where);
  if (M.rows() != n || M.cols() != n) fail(where, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  return M;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     (pos == std::string::npos ? msg : msg.substr(pos)));
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = d[h & 15];
  return s;
}

std::string digest(const json& j) { return "fnv1a64:" + hex64(fnv1a(j.dump())); }

// ---------------------------------------------------------------- modules

int module_precision(const json& j) {
  auto it = j.find("precision");
  if (it == j.end()) return 64;
  long v = get_long(*it, "/precision");
  if (v < 8 || v > 100000) fail("/precision", "precision out of range");
  return static_cast<int>(v);
}

ModuleInput parse_module(const json& j, int precision) {
  if (!j.is_object()) fail("", "module file must be an object");
  const long p = get_long(field(j, "p", ""), "/p");
  const long f = j.contains("f") ? get_long(j["f"], "/f") : 1;
  if (p < 2 || !is_prime(p)) fail("/p", "p must be prime");
  if (f < 1 || f > 12) fail("/f", "residue degree out of range");
  ModuleInput m;
  m.K = LocalField::unramified(p, static_cast<int>(f), precision > 0 ? precision : module_precision(j));
  auto rows = get_matrix(field(j, "frobenius", ""), "/frobenius");
  PMat A = to_matrix(m.K, rows, "/frobenius");
  if (A.rows() == 0 || A.rows() != A.cols()) fail("/frobenius", "expected a non-empty square matrix");
  if (f == 1) {
    // Rational data: singularity is decided exactly rather than at the working precision.
    QMat Aq(A.rows(), A.cols());
    for (Eigen::Index r = 0; r < A.rows(); ++r)
      for (Eigen::Index c = 0; c < A.cols(); ++c) Aq(r, c) = rows[r][c].empty() ? Rational(0) : rows[r][c][0];
    if (rank(Aq) != A.rows()) fail("/frobenius", "Frobenius matrix is not invertible");
  }
  try {
    m.D = PhiModule(A);
  } catch (const ValidationError& e) {
    fail("/frobenius", e.what());
  }
  const int n = m.D.dim();
  m.toric = PMat::Constant(n, 0, Padic::exact_zero(m.K));
  if (j.contains("toric")) {
    auto vecs = get_matrix(j["toric"], "/toric");
    if (!vecs.empty()) {
      PMat T = to_matrix(m.K, vecs, "/toric");
      if (T.cols() != n) fail("/toric", "vectors must have length " + std::to_string(n));
      m.toric = T.transpose();
    }
  }
  if (j.contains("polarization")) {
    const int nb = n - static_cast<int>(m.toric.cols());
    m.polarization = square(m.K, j["polarization"], nb, "/polarization");
  }
  if (j.contains("lambda_T"))
    m.lambda_T = square(m.K, j["lambda_T"], static_cast<int>(m.toric.cols()), "/lambda_T");
  return m;
}

SemiAbelianPhiModule ModuleInput::semi_abelian_module() const {
  PMat J = polarization ? *polarization : PMat(0, 0);
  return SemiAbelianPhiModule(D, toric, J, lambda_T);
}

// ---------------------------------------------------------------- extensions

FieldPtr parse_extension(const json& j, const FieldPtr& K) {
  if (j.is_null() || (j.is_object() && j.empty())) return K;
  ExtensionSpec s;
  const json& eis = field(j, "eisenstein", "");
  if (!eis.is_array() || eis.empty()) fail("/eisenstein", "expected the coefficients c_0, ..., c_{e-1}");
  for (std::size_t i = 0; i < eis.size(); ++i) s.eisenstein.push_back(get_coords(eis[i], at("/eisenstein", i)));
  if (j.contains("automorphisms")) {
    const json& a = j["automorphisms"];
    if (!a.is_array()) fail("/automorphisms", "expected a list");
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string w = at("/automorphisms", i);
      const json& name = field(a[i], "name", w);
      if (!name.is_string()) fail(at(w, "name"), "expected a string");
      const json& img = field(a[i], "image", w);
      if (!img.is_array()) fail(at(w, "image"), "expected a list of coefficients");
      ExtensionSpec::Automorphism au;
      au.name = name.get<std::string>();
      for (std::size_t k = 0; k < img.size(); ++k) au.image.push_back(get_coords(img[k], at(at(w, "image"), k)));
      s.automorphisms.push_back(std::move(au));
    }
  }
  try {
    return LocalField::eisenstein(K, s);
  } catch (const ValidationError& e) {
    fail("/eisenstein", e.what());
  }
}

// ---------------------------------------------------------------- groups

FiniteGroup parse_group_structure(const json& j) {
  const json& g = field(j, "group", "");
  if (g.contains("cyclic")) {
    long n = get_long(g["cyclic"], "/group/cyclic");
    if (n < 1 || n > 4096) fail("/group/cyclic", "order out of range");
    return cyclic(static_cast<int>(n));
  }
  if (g.contains("quaternion")) return quaternion_group();
  if (g.contains("trivial")) return FiniteGroup::from_raw(1, {0}, {"1"});
  const json& names = field(g, "names", "/group");
  const json& table = field(g, "table", "/group");
  if (!names.is_array() || !table.is_array() || names.size() != table.size())
    fail("/group", "names and table must be lists of the same length");
  std::vector<std::string> nm;
  std::vector<std::vector<int>> t;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!names[i].is_string()) fail(at("/group/names", i), "expected a string");
    nm.push_back(names[i].get<std::string>());
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::vector<int> row;
    if (!table[i].is_array() || table[i].size() != names.size()) fail(at("/group/table", i), "row has the wrong length");
    for (std::size_t k = 0; k < table[i].size(); ++k) {
      long v = get_long(table[i][k], at(at("/group/table", i), k));
      if (v < 0 || v >= static_cast<long>(names.size())) fail(at(at("/group/table", i), k), "index out of range");
      row.push_back(static_cast<int>(v));
    }
    t.push_back(std::move(row));
  }
  try {
    return FiniteGroup::from_table(nm, t);
  } catch (const ValidationError& e) {
    fail("/group/table", e.what());
  }
}

GroupInput parse_group(const json& j, const FieldPtr& K, int dim) {
  GroupInput out;
  out.G = parse_group_structure(j);
  auto element = [&](const json& e, const std::string& w) {
    if (!e.is_string()) fail(w, "expected an element name");
    try {
      return out.G.index_of(e.get<std::string>());
    } catch (const std::exception&) {
      fail(w, "unknown element \"" + e.get<std::string>() + "\"");
    }
  };
  std::vector<std::pair<int, PMat>> gens;
  if (j.contains("action")) {
    const json& a = j["action"];
    if (!a.is_array()) fail("/action", "expected a list of generator images");
    std::optional<GroupAction> q8;
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string w = at("/action", i);
      int g = element(field(a[i], "element", w), at(w, "element"));
      if (a[i].contains("matrix")) {
        gens.emplace_back(g, square(K, a[i]["matrix"], dim, at(w, "matrix")));
      } else if (a[i].contains("quaternion")) {
        if (!q8) {
          try {
            q8 = quaternion_action(K);
          } catch (const FieldIncompatibility& e) {
            fail(at(w, "quaternion"), e.what());
          }
        }
        const json& qn = a[i]["quaternion"];
        if (!qn.is_string()) fail(at(w, "quaternion"), "expected an element of Q8");
        int qi;
        try {
          qi = q8->group().index_of(qn.get<std::string>());
        } catch (const std::exception&) {
          fail(at(w, "quaternion"), "unknown element of Q8");
        }
        long blocks = a[i].contains("blocks") ? get_long(a[i]["blocks"], at(w, "blocks")) : dim / 2;
        if (blocks < 1 || 2 * blocks != dim) fail(at(w, "blocks"), "blocks must fill the module");
        gens.emplace_back(g, block_diagonal(std::vector<PMat>(static_cast<size_t>(blocks), (*q8)(qi))));
      } else if (a[i].contains("scalar")) {
        Rational c = get_rational(a[i]["scalar"], at(w, "scalar"));
        PMat M = PMat::Constant(dim, dim, Padic::exact_zero(K));
        for (int d = 0; d < dim; ++d) M(d, d) = Padic(K, c);
        gens.emplace_back(g, M);
      } else {
        fail(w, "expected \"matrix\", \"scalar\" or \"quaternion\"");
      }
    }
  }
  if (out.G.order() == 1) {
    out.action = GroupAction(out.G, {identity(dim, K)});
  } else {
    try {
      out.action = GroupAction::from_generators(out.G, gens);
    } catch (const ValidationError& e) {
      fail("/action", e.what());
    }
  }
  if (j.contains("galois")) {
    const json& gl = j["galois"];
    if (!gl.is_array()) fail("/galois", "expected a list");
    for (std::size_t i = 0; i < gl.size(); ++i) {
      std::string w = at("/galois", i);
      int g = element(field(gl[i], "element", w), at(w, "element"));
      const json& an = field(gl[i], "automorphism", w);
      if (!an.is_string()) fail(at(w, "automorphism"), "expected a name");
      out.galois.emplace_back(g, an.get<std::string>());
    }
  }
  return out;
}

GaloisSetup galois_setup(const GroupInput& g, const FieldPtr& L) {
  if (g.G.order() == 1 && L->is_unramified()) return GaloisSetup::trivial(L);
  return GaloisSetup::from_generators(g.G, L, g.galois);
}

// ---------------------------------------------------------------- p-adic data

json padic_to_json(const Padic& a) {
  if (a.is_constant()) return json{{"q", a.constant().str()}};
  const std::int64_t A = a.abs_precision_units();
  json prec = A >= kExact ? json("exact") : json(A);
  if (a.is_zero()) return json{{"zero", prec}};
  json c = json::array();
  for (const auto& v : a.coeffs()) c.push_back(v.get_str());
  return json{{"v", a.shift()}, {"c", c}, {"a", prec}};
}

Padic padic_from_json(const json& j, const FieldPtr& F, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a p-adic element");
  auto prec = [&](const json& p) -> std::int64_t {
    if (p.is_string() && p.get<std::string>() == "exact") return kExact;
    if (!p.is_number_integer()) fail(where, "bad precision");
    return p.get<std::int64_t>();
  };
  if (j.contains("q")) return Padic(F, get_rational(j["q"], at(where, "q")));
  if (j.contains("zero")) {
    std::int64_t A = prec(j["zero"]);
    return A >= kExact ? Padic::exact_zero(F) : Padic::zero(F, A);
  }
  const json& c = field(j, "c", where);
  if (!c.is_array() || static_cast<int>(c.size()) != F->e() * F->f()) fail(at(where, "c"), "wrong number of coefficients");
  Coeffs co;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_string()) fail(at(at(where, "c"), i), "expected a decimal string");
    try {
      co.emplace_back(c[i].get<std::string>(), 10);
    } catch (const std::exception&) {
      fail(at(at(where, "c"), i), "bad integer");
    }
  }
  return Padic::from_coeffs(F, get_long(field(j, "v", where), at(where, "v")), std::move(co), prec(field(j, "a", where)));
}

json matrix_to_json(const PMat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(padic_to_json(M(i, k)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"entries", rows}};
}

PMat matrix_from_json(const json& j, const FieldPtr& F, int rows, int cols, const std::string& where) {
  const long r = get_long(field(j, "rows", where), at(where, "rows"));
  const long c = get_long(field(j, "cols", where), at(where, "cols"));
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) fail(where, "matrix has the wrong shape");
  const json& e = field(j, "entries", where);
  if (!e.is_array() || static_cast<long>(e.size()) != r) fail(at(where, "entries"), "wrong number of rows");
  PMat M = PMat::Constant(r, c, Padic::exact_zero(F));
  for (long i = 0; i < r; ++i) {
    if (!e[i].is_array() || static_cast<long>(e[i].size()) != c) fail(at(at(where, "entries"), i), "wrong row length");
    for (long k = 0; k < c; ++k) M(i, k) = padic_from_json(e[i][k], F, at(at(at(where, "entries"), i), k));
  }
  return M;
}

json report_to_json(const AdmissibilityReport& r) {
  json ledger = json::array();
  for (const auto& e : r.ledger)
    ledger.push_back({{"dim", e.dim}, {"t_H", e.t_H}, {"bound", e.bound.str()}, {"ok", e.ok}});
  json out{{"admissible", r.admissible},
           {"mode", r.mode == SubmoduleMode::exact ? "exact" : "sampled"},
           {"samples", r.samples},
           {"ledger", ledger}};
  if (r.violation) {
    out["violation"] = {{"index", *r.violation}, {"N", matrix_to_json(r.ledger[*r.violation].N)}};
  }
  return out;
}

}  // namespace isocrys::io
