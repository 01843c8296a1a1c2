#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "isocrys/filtration.hpp"
#include "isocrys/grouprep.hpp"
#include "isocrys/isocrystal.hpp"

namespace isocrys::io {

using nlohmann::json;

// Parses text; syntax errors become ParseError with line and column.
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);
// Digest of the compact dump.
std::string digest(const json& j);

// Module file:
//   {"p": 2, "f": 1, "precision": 64,
//    "frobenius": [[...]],        rows of entries
//    "polarization": [[...]],     optional Gram matrix (of D, or of D/D_T with a torus)
//    "toric": [[...]],            optional list of column vectors spanning D_T
//    "lambda_T": [[...]]}         optional
// An entry is an integer, a string "a/b", or a list of such giving the
// coordinates on 1, x, ..., x^{f-1} with x the Teichmüller generator.
struct ModuleInput {
  FieldPtr K;
  PhiModule D;
  std::optional<PMat> polarization;
  PMat toric;
  std::optional<PMat> lambda_T;
  bool semi_abelian() const { return toric.cols() > 0; }
  SemiAbelianPhiModule semi_abelian_module() const;
};
ModuleInput parse_module(const json& j, int precision = 0);
int module_precision(const json& j);

// Extension file: {"eisenstein": [c_0, ..., c_{e-1}], "automorphisms": [{"name": "tau", "image": [...]}]}
// with entries in the format above; an empty object means L = K.
FieldPtr parse_extension(const json& j, const FieldPtr& K);

// Group file:
//   {"group": {"cyclic": n} | {"quaternion": true} | {"trivial": true} | {"names": [...], "table": [[...]]},
//    "action": [{"element": "a", "matrix": [[...]]} | {"element": "a", "scalar": -1} |
//               {"element": "a", "quaternion": "k", "blocks": 2}],      blocks defaults to dim / 2
//    "galois": [{"element": "a", "automorphism": "tau"}]}
struct GroupInput {
  FiniteGroup G;
  GroupAction action;
  std::vector<std::pair<int, std::string>> galois;
};
FiniteGroup parse_group_structure(const json& j);
GroupInput parse_group(const json& j, const FieldPtr& K, int dim);
GaloisSetup galois_setup(const GroupInput& g, const FieldPtr& L);

json padic_to_json(const Padic& a);
Padic padic_from_json(const json& j, const FieldPtr& F, const std::string& where = "");
json matrix_to_json(const PMat& M);
PMat matrix_from_json(const json& j, const FieldPtr& F, int rows, int cols, const std::string& where = "");

json report_to_json(const AdmissibilityReport& r);

}  // namespace isocrys::io
