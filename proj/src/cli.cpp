#include "spectra/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "spectra/acceptance.hpp"
#include "spectra/error.hpp"
#include "spectra/finite_oracle.hpp"
#include "spectra/loop.hpp"

namespace spectra {

void RunConfig::validate() const {
  for (double t : {membership_tol, quadrature_tol, period_tol, closedness_tol}) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be > 0");
  }
  if (n < 2 || loop_n < 2) throw Error(ErrorKind::InvalidArgument, "N must be >= 2");
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "n_nodes must be even and >= 4");
  }
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, "config " + path + ": " + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  try {
    get("membership_tol", base.membership_tol);
    get("quadrature_tol", base.quadrature_tol);
    get("period_tol", base.period_tol);
    get("closedness_tol", base.closedness_tol);
    get("N", base.n);
    get("loop_N", base.loop_n);
    get("n_nodes", base.n_nodes);
    get("seed", base.seed);
    get("out", base.out_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, "config " + path + ": " + e.what());
  }
  return base;
}

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Error(ErrorKind::Parse, "bad complex literal '" + text + "' (expected re,im)");
    }
    return v;
  };
  if (comma == std::string::npos) return {number(text), 0.0};
  return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
}

namespace {

PencilPoint parse_point(const std::vector<std::string>& parts) {
  if (parts.size() != 4) throw Error(ErrorKind::Parse, "a point needs four complex coordinates");
  PencilPoint z;
  for (std::size_t i = 0; i < 4; ++i) z[i] = parse_complex(parts[i]);
  return z;
}

std::pair<double, double> parse_pair(const std::string& text) {
  const cplx c = parse_complex(text);
  return {c.real(), c.imag()};
}

class Emitter {
 public:
  Emitter(std::ostream& out, const RunConfig& cfg) : out_(out), cfg_(cfg) {}

  void json_artifact(const std::string& name, const json& body) {
    const std::string text = with_header(body, cfg_.seed).dump(2);
    out_ << text << '\n';
    save(name + ".json", text + '\n');
  }

  void text_artifact(const std::string& file, const std::string& text) {
    out_ << text;
    save(file, text);
  }

 private:
  void save(const std::string& file, const std::string& text) {
    if (cfg_.out_dir.empty()) return;
    std::filesystem::create_directories(cfg_.out_dir);
    std::ofstream f(std::filesystem::path(cfg_.out_dir) / file);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write into " + cfg_.out_dir);
    f << text;
  }

  std::ostream& out_;
  const RunConfig& cfg_;
};

struct LoopOptions {
  std::string name = "L1";
  std::vector<std::string> center;
  double radius = 0.5;
  std::string axes = "0,3";
  std::string signs = "1,-1";
  int winding = 1;
  int steps = 512;
};

LoopPath make_loop(const LoopOptions& o) {
  LoopPath loop;
  if (o.name == "L1") {
    loop = loop_L1();
  } else if (o.name == "L2") {
    loop = loop_L2();
  } else if (o.name == "circle") {
    const auto [u, v] = parse_pair(o.axes);
    const auto [su, sv] = parse_pair(o.signs);
    loop = circle_loop("circle", parse_point(o.center), o.radius, static_cast<int>(u),
                       static_cast<int>(v), su, sv, o.winding);
  } else {
    throw Error(ErrorKind::Parse, "unknown loop '" + o.name + "' (L1, L2 or circle)");
  }
  loop.steps = o.steps;
  return loop;
}

std::vector<int> parse_letters(const std::string& text) {
  std::vector<int> word;
  for (char c : text) {
    if (c == ' ' || c == ',') continue;
    if (c < '1' || c > '4') throw Error(ErrorKind::Parse, "tree words use letters 1..4");
    word.push_back(c - '0');
  }
  return word;
}

std::string join_letters(const std::vector<int>& w) {
  std::string s;
  for (int x : w) s += static_cast<char>('0' + x);
  return s;
}

json error_json(const std::string& kind, const std::string& message) {
  return json{{"schema_version", kSchemaVersion}, {"error", kind}, {"message", message}};
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint spectrum, trace 1-forms and tree representations of D-infinity-h", "spectra"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--config", config_path, "JSON file with RunConfig fields");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "directory for artifacts");

  std::vector<std::string> z_text;
  double tol = 0.0;
  std::string functional_text = "tr";
  std::string word_text = "e";
  std::string method = "quadrature";
  int n_opt = 0;
  int n_nodes_opt = 0;
  std::string source_text = "adjudicated";

  auto* membership_cmd = app.add_subcommand("membership", "closed-form spectrum membership");
  membership_cmd->add_option("--z", z_text, "z0 z1 z2 z3 as re,im")->required()->expected(4);
  membership_cmd->add_option("--tol", tol, "membership tolerance");

  int u_axis = 0, v_axis = 1, n_u = 5, n_v = 5;
  std::string u_range = "-2,2", v_range = "-2,2";
  auto* slice_cmd = app.add_subcommand("slice", "membership raster over a real 2-plane (CSV)");
  slice_cmd->add_option("--base", z_text, "point supplying the fixed coordinates")->expected(4);
  slice_cmd->add_option("--u-axis", u_axis);
  slice_cmd->add_option("--v-axis", v_axis);
  slice_cmd->add_option("--nu", n_u);
  slice_cmd->add_option("--nv", n_v);
  slice_cmd->add_option("--u-range", u_range, "lo,hi");
  slice_cmd->add_option("--v-range", v_range, "lo,hi");
  slice_cmd->add_option("--tol", tol);

  auto* trace_cmd = app.add_subcommand("trace", "coefficient of the trace 1-form");
  trace_cmd->add_option("--z", z_text)->required()->expected(4);
  trace_cmd->add_option("--functional", functional_text, "tr or phitr");
  trace_cmd->add_option("--word", word_text, "e, a, t or tau");
  trace_cmd->add_option("--method", method, "quadrature, oracle or paper");
  trace_cmd->add_option("--N", n_opt, "truncation size for --method oracle");
  trace_cmd->add_option("--n-nodes", n_nodes_opt);

  double step = kDefaultStep;
  auto* mc_cmd = app.add_subcommand("mc-check", "closedness residual of a trace 1-form (CSV)");
  mc_cmd->add_option("--z", z_text)->required()->expected(4);
  mc_cmd->add_option("--functional", functional_text);
  mc_cmd->add_option("--step", step);
  mc_cmd->add_option("--source", source_text, "adjudicated or paper");
  mc_cmd->add_option("--tol", tol);
  mc_cmd->add_option("--n-nodes", n_nodes_opt);

  LoopOptions loop_opt;
  auto add_loop_options = [&](CLI::App* cmd) {
    cmd->add_option("--center", loop_opt.center, "circle centre")->expected(4);
    cmd->add_option("--radius", loop_opt.radius);
    cmd->add_option("--axes", loop_opt.axes, "u,v coordinate indices");
    cmd->add_option("--signs", loop_opt.signs, "su,sv");
    cmd->add_option("--winding", loop_opt.winding);
    cmd->add_option("--steps", loop_opt.steps);
  };
  auto* period_cmd = app.add_subcommand("period", "period of a trace 1-form over a loop");
  period_cmd->add_option("--loop", loop_opt.name, "L1, L2 or circle");
  period_cmd->add_option("--functional", functional_text);
  period_cmd->add_option("--method", method, "quadrature or oracle");
  period_cmd->add_option("--N", n_opt);
  period_cmd->add_option("--n-nodes", n_nodes_opt);
  add_loop_options(period_cmd);

  std::vector<std::string> loop_names{"L1", "L2"};
  auto* indep_cmd = app.add_subcommand("independence", "period matrix and its rank");
  indep_cmd->add_option("--loops", loop_names, "loop names");
  indep_cmd->add_option("--n-nodes", n_nodes_opt);

  std::string element_text = "a";
  std::string tree_word;
  int level = 1;
  auto* tree_cmd = app.add_subcommand("tree", "level permutation or action on a word");
  tree_cmd->add_option("--element", element_text, "word over a, t, T, e");
  tree_cmd->add_option("--level", level);
  tree_cmd->add_option("--word", tree_word, "tree word over 1..4");

  double z1 = 1.0, z2 = 1.0, z3 = 0.5;
  bool validate = false;
  auto* spec_cmd = app.add_subcommand("tree-spectrum", "level-n pencil eigenvalues (CSV)");
  spec_cmd->add_option("--z1", z1);
  spec_cmd->add_option("--z2", z2);
  spec_cmd->add_option("--z3", z3);
  spec_cmd->add_option("--level", level);
  spec_cmd->add_flag("--validate", validate, "check every eigenvalue against the spectrum");
  spec_cmd->add_option("--tol", tol);

  int level_max = 5;
  int level_min = 2;
  auto* cov_cmd = app.add_subcommand("coverage", "coverage gap of level eigenvalues");
  cov_cmd->add_option("--z1", z1);
  cov_cmd->add_option("--z2", z2);
  cov_cmd->add_option("--z3", z3);
  cov_cmd->add_option("--from", level_min);
  cov_cmd->add_option("--to", level_max);

  std::vector<int> criteria;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_option("--criteria", criteria, "criterion ids (default all)")->delimiter(',');

  auto* erratum_cmd = app.add_subcommand("erratum-report", "adjudicate published trace formulas");
  erratum_cmd->add_option("--N", n_opt);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("UsageError", e.what()).dump() << '\n';
    return kExitUsage;
  }

  try {
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    if (app.count("--seed") > 0) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (n_nodes_opt > 0) cfg.n_nodes = n_nodes_opt;
    cfg.validate();
    Emitter emit(out, cfg);
    const double mtol = tol > 0.0 ? tol : cfg.membership_tol;

    if (*membership_cmd) {
      emit.json_artifact("membership", membership_json(membership(parse_point(z_text), mtol)));
      return kExitOk;
    }
    if (*slice_cmd) {
      SlicePlane plane{u_axis, v_axis, z_text.empty() ? PencilPoint() : parse_point(z_text)};
      SliceGrid grid;
      grid.n_u = n_u;
      grid.n_v = n_v;
      std::tie(grid.u_min, grid.u_max) = parse_pair(u_range);
      std::tie(grid.v_min, grid.v_max) = parse_pair(v_range);
      std::ostringstream csv;
      write_raster_csv(csv, slice_raster(plane, grid, mtol), cfg.seed);
      emit.text_artifact("slice.csv", csv.str());
      return kExitOk;
    }
    if (*trace_cmd) {
      const PencilPoint z = parse_point(z_text);
      const Functional f = parse_functional(functional_text);
      const Word w = parse_word(word_text);
      cplx value;
      std::string origin;
      if (method == "oracle") {
        const int n = n_opt > 0 ? n_opt : cfg.n;
        value = PencilFactorization(z, n).trace(f, w);
        origin = "finite-oracle N=" + std::to_string(n);
      } else if (method == "quadrature" || method == "paper") {
        const auto src = method == "paper" ? CoefficientSource::PaperFormula : CoefficientSource::Adjudicated;
        value = trace_quadrature({z, f, w, cfg.n_nodes, src});
        origin = to_string(integrand_origin(f, w, src));
      } else {
        throw Error(ErrorKind::Parse, "unknown method '" + method + "'");
      }
      emit.json_artifact("trace", json{{"functional", to_string(f)},
                                       {"word", to_string(w)},
                                       {"method", method},
                                       {"origin", origin},
                                       {"value_re", value.real()},
                                       {"value_im", value.imag()}});
      return kExitOk;
    }
    if (*mc_cmd) {
      const auto src = source_text == "paper" ? CoefficientSource::PaperFormula
                       : source_text == "adjudicated"
                           ? CoefficientSource::Adjudicated
                           : throw Error(ErrorKind::Parse, "unknown source '" + source_text + "'");
      const ResidualMatrix r = closedness_residual(parse_point(z_text), parse_functional(functional_text),
                                                   step, cfg.n_nodes, src);
      std::ostringstream csv;
      write_residual_csv(csv, r, cfg.seed);
      emit.text_artifact("mc-check.csv", csv.str());
      double worst = 0.0;
      for (const auto& row : r) worst = std::max(worst, *std::max_element(row.begin(), row.end()));
      return worst <= (tol > 0.0 ? tol : cfg.closedness_tol) ? kExitOk : kExitVerification;
    }
    if (*period_cmd) {
      const LoopPath loop = make_loop(loop_opt);
      const Functional f = parse_functional(functional_text);
      PeriodReport rep;
      if (method == "oracle") {
        rep = make_period_report(oracle_period(loop, f, n_opt > 0 ? n_opt : cfg.loop_n, loop.steps), f);
      } else if (method == "quadrature") {
        rep = loop_period(loop, f, cfg.n_nodes);
      } else {
        throw Error(ErrorKind::Parse, "unknown method '" + method + "'");
      }
      json body = period_json(loop.name, f, rep);
      body["method"] = method;
      emit.json_artifact("period", body);
      return rep.residual <= cfg.period_tol ? kExitOk : kExitVerification;
    }
    if (*indep_cmd) {
      std::vector<LoopPath> loops;
      for (const auto& name : loop_names) {
        LoopOptions o;
        o.name = name;
        loops.push_back(make_loop(o));
      }
      const IndependenceReport rep = class_independence(loops, cfg.n_nodes);
      emit.json_artifact("independence", independence_json(loop_names, rep));
      for (const auto& row : rep.residuals) {
        for (double r : row) {
          if (r > cfg.period_tol) return kExitVerification;
        }
      }
      return kExitOk;
    }
    if (*tree_cmd) {
      const GroupElement g = parse_element(element_text);
      if (!tree_word.empty()) {
        const auto image = act_on_word(g, parse_letters(tree_word));
        emit.json_artifact("tree", json{{"element", to_string(g)},
                                        {"word", join_letters(parse_letters(tree_word))},
                                        {"image", join_letters(image)}});
      } else {
        std::ostringstream dump;
        write_level_matrix(dump, level_matrix(g, level));
        emit.text_artifact("tree.txt", dump.str());
      }
      return kExitOk;
    }
    if (*spec_cmd) {
      if (validate) {
        const EigenValidation v = validate_eigs_in_spectrum(z1, z2, z3, level, tol > 0.0 ? tol : 1e-8);
        json viol = json::array();
        for (const auto& x : v.violations) viol.push_back(json{{"lambda", x.lambda}, {"margin", x.margin}});
        emit.json_artifact("tree-spectrum", json{{"level", level},
                                                 {"z", {z1, z2, z3}},
                                                 {"eigenvalues", v.eigenvalues.size()},
                                                 {"violations", viol},
                                                 {"max_margin", v.max_margin}});
        return v.violations.empty() ? kExitOk : kExitVerification;
      }
      std::ostringstream csv;
      write_eigen_csv(csv, level, z1, z2, z3, pencil_level_eigs(z1, z2, z3, level), cfg.seed);
      emit.text_artifact("tree-spectrum.csv", csv.str());
      return kExitOk;
    }
    if (*cov_cmd) {
      json gaps = json::array();
      for (int n = level_min; n <= level_max; ++n) {
        gaps.push_back(json{{"level", n}, {"gap", coverage_gap(z1, z2, z3, n)}});
      }
      json slice = json::array();
      for (const auto& iv : spectrum_slice(z1, z2, z3)) slice.push_back({iv[0], iv[1]});
      emit.json_artifact("coverage", json{{"z", {z1, z2, z3}}, {"slice", slice}, {"gaps", gaps}});
      return kExitOk;
    }
    if (*verify_cmd) {
      AcceptanceConfig acfg;
      acfg.seed = cfg.seed;
      acfg.membership_tol = cfg.membership_tol;
      acfg.period_tol = cfg.period_tol;
      acfg.oracle_n = cfg.n;
      acfg.loop_n = cfg.loop_n;
      acfg.n_nodes = cfg.n_nodes;
      bool all = true;
      json results = json::array();
      for (int id : criteria.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9} : criteria) {
        const CriterionResult r = run_criterion(id, acfg);
        out << format_result(r) << std::endl;
        all = all && r.passed;
        results.push_back(json{{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                               {"detail", r.detail}, {"seconds", r.seconds}});
      }
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream(std::filesystem::path(cfg.out_dir) / "verify.json")
            << with_header(json{{"results", results}, {"passed", all}}, cfg.seed).dump(2) << '\n';
      }
      return all ? kExitOk : kExitVerification;
    }
    if (*erratum_cmd) {
      ErratumSettings s;
      s.n = n_opt > 0 ? n_opt : cfg.n;
      s.n_nodes = cfg.n_nodes;
      const json rep = erratum_report(s);
      emit.json_artifact("erratum-report", rep);
      return rep.at("checks").at("all").get<bool>() ? kExitOk : kExitVerification;
    }
  } catch (const Error& e) {
    err << error_json(to_string(e.kind()), e.what()).dump() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << error_json("InternalError", e.what()).dump() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace spectra
