#include "isocrys/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "isocrys/bounds.hpp"
#include "isocrys/errors.hpp"
#include "isocrys/filtration.hpp"
#include "isocrys/io.hpp"
#include "isocrys/precision.hpp"

namespace isocrys::cli {

using io::json;

namespace {

std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const json& need(const json& doc, const std::string& pointer) {
  try {
    return doc.at(json::json_pointer(pointer));
  } catch (const json::exception&) {
    throw ParseError("certificate: missing " + pointer);
  }
}

json optional_file(const std::string& path) { return path.empty() ? json::object() : io::read_json_file(path); }

int start_precision(int flag, const json& module) { return flag > 0 ? flag : io::module_precision(module); }

SubmoduleMode parse_mode(const std::string& s) {
  if (s == "exact") return SubmoduleMode::exact;
  if (s == "sampled") return SubmoduleMode::sampled;
  throw ParseError("mode must be \"exact\" or \"sampled\", got \"" + s + "\"");
}

const char* mode_name(SubmoduleMode m) { return m == SubmoduleMode::exact ? "exact" : "sampled"; }

json verification_to_json(const EAdmVerification& v) {
  return {{"lagrangian", v.lagrangian},
          {"torus_containment", v.contains_torus},
          {"admissibility", v.admissible},
          {"graded_admissibility_sub", v.sub_admissible},
          {"graded_admissibility_quotient", v.quotient_admissible},
          {"diagonal_stability", v.stable},
          {"cocycle", v.cocycle},
          {"descent_datum", v.descent},
          {"failure", v.failure()},
          {"ledgers",
           {{"full", io::report_to_json(v.full)},
            {"sub", io::report_to_json(v.sub)},
            {"quotient", io::report_to_json(v.quotient)}}}};
}

json datum_to_json(const DescentDatum& d, const FiniteGroup& G) {
  json out = json::array();
  for (int h = 0; h < G.order(); ++h) out.push_back({{"element", G.name(h)}, {"map", io::matrix_to_json(d.maps[h])}});
  return out;
}

struct Setup {
  io::ModuleInput m;
  FieldPtr L;
  io::GroupInput g;
  GaloisSetup S;
};

// Prefixes parse errors raised by body with the name of the input.
template <class F>
auto in_file(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ParseError& e) {
    throw ParseError(name + ": " + e.what());
  }
}

struct Names {
  std::string module, group, extension;
};

Setup load(const json& mj, const json& gj, const json& ej, int precision, const Names& names) {
  Setup s;
  s.m = in_file(names.module, [&] { return io::parse_module(mj, precision); });
  const int n = s.m.D.dim();
  if (!s.m.polarization && n > s.m.toric.cols())
    throw ParseError(names.module + ": /: missing key \"polarization\"");
  s.L = in_file(names.extension, [&] { return io::parse_extension(ej, s.m.K); });
  s.g = in_file(names.group, [&] { return io::parse_group(gj, s.m.K, n); });
  s.S = io::galois_setup(s.g, s.L);
  return s;
}

// ---------------------------------------------------------------- commands

int cmd_slopes(const std::string& module, int precision, std::ostream& out) {
  json mj = io::read_json_file(module);
  SlopeProfile prof = with_escalation(start_precision(precision, mj), [&](int prec) {
    return newton_slopes(in_file(module, [&] { return io::parse_module(mj, prec); }).D);
  });
  for (const auto& [s, mult] : prof.slopes) out << s.str() << " ×" << mult << "\n";
  return kExitOk;
}

int cmd_decompose(const std::string& module, const std::string& group, int precision, std::ostream& out) {
  json mj = io::read_json_file(module);
  json gj = optional_file(group);
  std::string text = with_escalation(start_precision(precision, mj), [&](int prec) {
    std::ostringstream os;
    io::ModuleInput m = in_file(module, [&] { return io::parse_module(mj, prec); });
    for (const auto& part : isoclinic_decompose(m.D))
      os << "slope " << part.slope.str() << ": dim " << part.basis.cols() << "\n";
    if (!group.empty()) {
      io::GroupInput g = in_file(group, [&] { return io::parse_group(gj, m.K, m.D.dim()); });
      g.action.check_phi_compatible(m.D);
      CharacterTable T = CharacterTable::compute(g.G);
      auto comps = isotypic_decomposition(g.action, T);
      for (const auto& c : comps) {
        os << "isotypic [";
        for (size_t i = 0; i < c.characters.size(); ++i) os << (i ? "," : "") << c.characters[i];
        os << "]: dim " << c.basis.cols() << "\n";
      }
      os << "K-elementary: " << (is_K_elementary(g.action, comps, T) ? "yes" : "no") << "\n";
    }
    return os.str();
  });
  out << text;
  return kExitOk;
}

json find_certificate(const json& mj, const json& gj, const json& ej, const Names& names, int prec,
                      std::uint64_t seed, SubmoduleMode mode, int budget) {
  Setup s = load(mj, gj, ej, prec, names);
  SemiAbelianPhiModule D = s.m.semi_abelian_module();
  EAdmResult r = find_admissible_stable_filtration(D, s.g.action, s.S, seed, mode, budget);
  json pieces = json::array();
  for (const auto& p : r.pieces) {
    json sl = json::array();
    for (const auto& q : p.slopes) sl.push_back(q.str());
    pieces.push_back({{"slopes", sl}, {"dim", p.dim}, {"method", p.method}});
  }
  json c;
  c["operation"] = "filtration find";
  c["version"] = kVersion;
  c["parameters"] = {{"seed", seed}, {"mode", mode_name(mode)}, {"budget", budget}, {"precision", prec}};
  c["inputs"] = {{"module", mj}, {"group", gj}, {"extension", ej}};
  c["input_digests"] = {{"module", io::digest(mj)}, {"group", io::digest(gj)}, {"extension", io::digest(ej)}};
  c["outputs"] = {{"field", s.L->describe()},
                  {"filtration", io::matrix_to_json(r.F.basis)},
                  {"descent_datum", datum_to_json(r.datum, s.g.G)},
                  {"pieces", pieces}};
  c["verification"] = verification_to_json(r.verification);
  c["verdict"] = r.verification.ok() ? "verified" : "violated: " + r.verification.failure();
  c["digest"] = certificate_digest(c);
  return c;
}

int cmd_find(const std::string& module, const std::string& group, const std::string& extension,
             std::uint64_t seed, const std::string& mode, int budget, int precision, const std::string& path,
             std::ostream& out, std::ostream& err) {
  json mj = io::read_json_file(module);
  json gj = io::read_json_file(group);
  json ej = optional_file(extension);
  SubmoduleMode md = parse_mode(mode);
  if (budget < 1) throw ParseError("--budget must be positive");
  json c = with_escalation(start_precision(precision, mj),
                           [&](int prec) {
                             return find_certificate(mj, gj, ej, {module, group, extension}, prec, seed, md, budget);
                           });
  c["created"] = timestamp();
  std::string text = c.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream f(path);
    if (!f) throw ParseError(path + ": cannot write");
    f << text;
    out << c["verdict"].get<std::string>() << "\n";
  }
  if (!c["verification"]["failure"].get<std::string>().empty()) {
    err << "violated: " << c["verification"]["failure"].get<std::string>() << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  json c = io::read_json_file(path);
  if (!c.is_object() || c.value("operation", "") != "filtration find")
    throw ParseError(path + ": not a filtration certificate");
  auto fail = [&](const std::string& property, const std::string& detail) {
    err << "violated: " << property << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    out << "FAIL " << property << "\n";
    return kExitVerification;
  };

  const json& inputs = need(c, "/inputs");
  for (const char* k : {"module", "group", "extension"}) {
    const json& stored = need(c, std::string("/input_digests/") + k);
    if (io::digest(need(inputs, std::string("/") + k)) != stored)
      return fail("input-digest", std::string(k) + " does not match its digest");
  }
  const json& params = need(c, "/parameters");
  const int prec = need(params, "/precision").get<int>();
  const auto seed = need(params, "/seed").get<std::uint64_t>();
  const SubmoduleMode mode = parse_mode(need(params, "/mode").get<std::string>());
  const int budget = need(params, "/budget").get<int>();

  Setup s = load(inputs["module"], inputs["group"], inputs["extension"], prec,
                 {path + ":/inputs/module", path + ":/inputs/group", path + ":/inputs/extension"});
  SemiAbelianPhiModule D = s.m.semi_abelian_module();
  if (need(c, "/outputs/field") != s.L->describe()) return fail("field", "extension differs from the certificate");
  Filtration F{s.L, io::matrix_from_json(need(c, "/outputs/filtration"), s.L, s.m.D.dim(), -1, "/outputs/filtration")};

  EAdmVerification v = verify_EAdm(D, s.g.action, s.S, F, mode, seed, budget);
  if (!v.ok()) return fail(v.failure(), "");
  if (verification_to_json(v) != need(c, "/verification")) return fail("verdict-mismatch", "ledgers differ");
  if (datum_to_json(descent_datum(s.g.action), s.g.G) != need(c, "/outputs/descent_datum"))
    return fail("descent-datum", "stored maps differ from the action");
  if (need(c, "/verdict") != "verified") return fail("verdict-mismatch", "stored verdict is not \"verified\"");
  if (need(c, "/digest") != certificate_digest(c)) return fail("certificate-digest", "");

  out << "verified:";
  for (const char* p : {"lagrangian", "torus-containment", "admissibility", "graded-admissibility-sub",
                        "graded-admissibility-quotient", "diagonal-stability", "cocycle", "descent-datum"})
    out << " " << p;
  out << "\n";
  return kExitOk;
}

int cmd_descend(const std::string& module, const std::string& group, const std::string& extension, int precision,
                std::ostream& out, std::ostream& err) {
  json mj = io::read_json_file(module);
  json gj = io::read_json_file(group);
  json ej = optional_file(extension);
  json doc = with_escalation(start_precision(precision, mj), [&](int prec) {
    Setup s = load(mj, gj, ej, prec, {module, group, extension});
    s.g.action.check_phi_compatible(s.m.D);
    DescentDatum d = descent_datum(s.g.action);
    PMat W = descended_basis(s.g.action, s.S);
    return json{{"field", s.L->describe()},
                {"precision", prec},
                {"descended_dim", W.cols()},
                {"descended_basis", io::matrix_to_json(W)},
                {"descent_datum", datum_to_json(d, s.g.G)},
                {"cocycle", check_cocycle(d, s.g.G)}};
  });
  out << doc.dump(2) << "\n";
  if (!doc["cocycle"].get<bool>()) {
    err << "violated: cocycle\n";
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_group_check(const std::string& group, const std::string& module, const std::string& extension,
                    int precision, std::ostream& out) {
  json gj = io::read_json_file(group);
  if (module.empty()) {
    FiniteGroup G = in_file(group, [&] { return io::parse_group_structure(gj); });
    CharacterTable T = CharacterTable::compute(G);
    out << "order " << G.order() << ", " << G.conjugacy_classes().size() << " classes\n";
    out << "degrees";
    for (const auto& chi : T.characters()) out << " " << chi.degree;
    out << "\n";
    return kExitOk;
  }
  json mj = io::read_json_file(module);
  json ej = optional_file(extension);
  std::string text = with_escalation(start_precision(precision, mj), [&](int prec) {
    std::ostringstream os;
    io::ModuleInput m = in_file(module, [&] { return io::parse_module(mj, prec); });
    io::GroupInput g = in_file(group, [&] { return io::parse_group(gj, m.K, m.D.dim()); });
    os << "order " << g.G.order() << ", faithful: " << (g.action.is_faithful() ? "yes" : "no") << "\n";
    g.action.check_phi_compatible(m.D);
    os << "phi-compatible: ok\n";
    if (m.polarization) {
      if (m.semi_abelian())
        quotient_action(m.semi_abelian_module(), g.action).check_symplectic(*m.polarization);
      else
        g.action.check_symplectic(*m.polarization);
      os << "symplectic: ok\n";
    }
    CharacterTable T = CharacterTable::compute(g.G);
    os << "K-elementary: " << (is_K_elementary(g.action, isotypic_decomposition(g.action, T), T) ? "yes" : "no")
       << "\n";
    PerturbateurSearch ps = find_perturbateur(g.action);
    if (ps.homothety)
      os << "perturbateur: homothety-action\n";
    else if (ps.element)
      os << "perturbateur: " << g.G.name(*ps.element) << "\n";
    else
      os << "perturbateur: none\n";
    if (!extension.empty()) {
      FieldPtr L = in_file(extension, [&] { return io::parse_extension(ej, m.K); });
      io::galois_setup(g, L);
      os << "galois: ok (" << L->describe() << ")\n";
    }
    return os.str();
  });
  out << text;
  return kExitOk;
}

int cmd_minkowski(long n, long table, std::ostream& out) {
  if ((n >= 0) == (table >= 0)) throw CLI::ValidationError("minkowski", "give exactly one of --n and --table");
  if (n >= 0) {
    out << minkowski_bound(n).get_str() << "\n";
    return kExitOk;
  }
  for (long k = 1; k <= table; ++k) {
    MinkowskiTable t = minkowski_table(k);
    out << k << "\t" << t.M.get_str() << "\t" << t.factorization() << "\n";
  }
  return kExitOk;
}

int cmd_wreath(long g, std::ostream& out, std::ostream& err) {
  if (g < 1 || g > 3) throw CLI::ValidationError("wreath-demo", "--g must be 1, 2 or 3");
  WreathOrderCheck c = wreath_order_check(g);
  out << "order " << c.order.get_str() << ", 2-part " << c.two_part.get_str() << ", predicted "
      << c.predicted.get_str() << "\n";
  FieldPtr Q4 = LocalField::unramified(2, 2, 64);
  GroupAction V = quaternion_action(Q4);
  GroupAction VW = wreath_action(V, wreath_with_symmetric(V.group(), static_cast<int>(g)));
  PMat J0 = PMat::Constant(2, 2, Padic::exact_zero(Q4));
  J0(0, 1) = Q4->one();
  J0(1, 0) = -Q4->one();
  std::vector<PhiModule> blocks(static_cast<size_t>(g), simple_isocrystal(Q4, 1, 2));
  VW.check_symplectic(block_diagonal(std::vector<PMat>(static_cast<size_t>(g), J0)));
  out << "symplectic: ok\n";
  VW.check_phi_compatible(direct_sum(blocks));
  out << "phi-compatible: ok\n";
  if (!c.agrees) {
    err << "violated: 2-part differs from 2^r(2g,2)\n";
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_degree(const std::string& spec, std::ostream& out) {
  std::vector<LocalPlace> places;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    LocalPlace v;
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      std::size_t used = 0;
      v.toric_rank = std::stol(item.substr(0, colon), &used);
      if (used != colon || v.toric_rank < 0) throw std::invalid_argument(item);
      v.component_order = Integer(item.substr(colon + 1));
      if (v.component_order < 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("--local: expected t:c with t >= 0 and c >= 1, got \"" + item + "\"");
    }
    places.push_back(v);
  }
  if (places.empty()) throw ParseError("--local: no places given");
  DegreeBounds b = lcm_degree_formulas(places);
  out << "d <= " << b.d_upper.get_str() << "\n";
  out << "d_dep <= " << b.d_dep_upper.get_str() << "\n";
  return kExitOk;
}

}  // namespace

std::string certificate_digest(const json& cert) {
  json c = cert;
  c.erase("digest");
  c.erase("created");
  return io::digest(c);
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Filtered phi-modules with finite group actions"};
  app.name("isocrys");
  app.require_subcommand(1);
  std::function<int()> action;

  std::string module, group, extension, out_path, mode = "exact", cert, local;
  int precision = 0, budget = kDefaultSampleBudget;
  std::uint64_t seed = 0;
  long n = -1, table = -1, g = 0;

  auto* slopes = app.add_subcommand("slopes", "Newton slopes of a phi-module");
  slopes->add_option("--module", module)->required()->check(CLI::ExistingFile);
  slopes->add_option("--precision", precision);
  slopes->callback([&] { action = [&] { return cmd_slopes(module, precision, out); }; });

  auto* decompose = app.add_subcommand("decompose", "Isoclinic and isotypic decompositions");
  decompose->add_option("--module", module)->required()->check(CLI::ExistingFile);
  decompose->add_option("--group", group)->check(CLI::ExistingFile);
  decompose->add_option("--precision", precision);
  decompose->callback([&] { action = [&] { return cmd_decompose(module, group, precision, out); }; });

  auto* filtration = app.add_subcommand("filtration", "Admissible stable filtrations");
  filtration->require_subcommand(1);
  auto* find = filtration->add_subcommand("find", "Construct and certify a filtration");
  find->add_option("--module", module)->required()->check(CLI::ExistingFile);
  find->add_option("--group", group)->required()->check(CLI::ExistingFile);
  find->add_option("--extension", extension)->check(CLI::ExistingFile);
  find->add_option("--seed", seed)->required();
  find->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
  find->add_option("--budget", budget);
  find->add_option("--precision", precision);
  find->add_option("--out", out_path);
  find->callback([&] {
    action = [&] { return cmd_find(module, group, extension, seed, mode, budget, precision, out_path, out, err); };
  });
  auto* check = filtration->add_subcommand("check", "Re-verify a certificate");
  check->add_option("certificate", cert)->required()->check(CLI::ExistingFile);
  check->callback([&] { action = [&] { return cmd_check(cert, out, err); }; });

  auto* descend = app.add_subcommand("descend", "Descent datum and descended basis");
  descend->add_option("--module", module)->required()->check(CLI::ExistingFile);
  descend->add_option("--group", group)->required()->check(CLI::ExistingFile);
  descend->add_option("--extension", extension)->check(CLI::ExistingFile);
  descend->add_option("--precision", precision);
  descend->callback([&] { action = [&] { return cmd_descend(module, group, extension, precision, out, err); }; });

  auto* grp = app.add_subcommand("group", "Group files");
  grp->require_subcommand(1);
  auto* gcheck = grp->add_subcommand("check", "Validate a group and its action");
  gcheck->add_option("--group", group)->required()->check(CLI::ExistingFile);
  gcheck->add_option("--module", module)->check(CLI::ExistingFile);
  gcheck->add_option("--extension", extension)->check(CLI::ExistingFile);
  gcheck->add_option("--precision", precision);
  gcheck->callback([&] { action = [&] { return cmd_group_check(group, module, extension, precision, out); }; });

  auto* mink = app.add_subcommand("minkowski", "Minkowski bound M(n)");
  mink->add_option("--n", n)->check(CLI::Range(0L, 100000L));
  mink->add_option("--table", table)->check(CLI::Range(1L, 10000L));
  mink->callback([&] { action = [&] { return cmd_minkowski(n, table, out); }; });

  auto* wreath = app.add_subcommand("wreath-demo", "Q8 wreath S_g acting on the supersingular block");
  wreath->add_option("--g", g)->required();
  wreath->callback([&] { action = [&] { return cmd_wreath(g, out, err); }; });

  auto* degree = app.add_subcommand("degree", "Degree bounds from local data");
  degree->add_option("--local", local, "t:c,... with t the toric rank and c the component group order")->required();
  degree->callback([&] { action = [&] { return cmd_degree(local, out); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    return action ? action() : kExitUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Error& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PrecisionFailure& e) {
    err << "precision exhausted (ceiling " << precision_ceiling() << "): " << e.what() << "\n";
    return kExitExhausted;
  } catch (const BudgetExhausted& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const ValidationError& e) {
    err << "violated: " << e.what() << "\n";
    return kExitVerification;
  } catch (const InternalContradiction& e) {
    err << "violated: " << e.what() << "\n";
    return kExitVerification;
  } catch (const MultiplicityError& e) {
    err << "violated: " << e.what() << "\n";
    return kExitVerification;
  } catch (const FieldIncompatibility& e) {
    err << "violated: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, out, err);
}

}  // namespace isocrys::cli
