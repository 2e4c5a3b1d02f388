#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surfdyn/dynamics.hpp"
#include "surfdyn/errors.hpp"
#include "surfdyn/mapio.hpp"
#include "surfdyn/spectral.hpp"
#include "surfdyn/surface.hpp"

using namespace surfdyn;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SURFDYN_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw input_error("SURFDYN_SEED must be an unsigned integer");
  }
  return 0;
}

MapFile read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open map file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("map file is not valid JSON: ") + e.what());
  }
  return map_file_from_json(j);
}

std::vector<Rational> parse_values(const std::string& list) {
  std::vector<Rational> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(rational_from_string(item));
  }
  if (out.empty()) {
    throw input_error(
        "--values must be a non-empty comma-separated list of rationals");
  }
  return out;
}

std::string render_matrix(const std::vector<std::vector<Int>>& m) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out << ", ";
    out << "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) out << ", ";
      out << to_string(m[i][j]);
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

struct CommonFlags {
  unsigned n = 5;
  unsigned trials = 3;
  std::uint64_t seed = 0;
  std::uint32_t height = 100;
  std::uint64_t budget = default_degree_budget();
  std::string tolerance = "1e-12";
};

AnalyzeOptions to_options(const CommonFlags& flags) {
  AnalyzeOptions opt;
  opt.n = flags.n;
  opt.budget = flags.budget;
  opt.tolerance = rational_from_decimal_string(flags.tolerance);
  opt.fiber.trials = flags.trials;
  opt.fiber.seed = flags.seed;
  opt.fiber.height = flags.height;
  return opt;
}

int cmd_analyze(const std::string& path, const CommonFlags& flags,
                bool as_json) {
  const auto f = load_map(read_map_file(path));
  const auto report = build_analysis_report(f, to_options(flags));
  std::cout << (as_json ? emit_report_json(report)
                        : emit_report_human(report));
  if (report.truncated) {
    std::cerr << "degree sequence truncated by the budget; report is partial"
              << std::endl;
    return 3;
  }
  return 0;
}

int cmd_iterate(const std::string& path, const CommonFlags& flags,
                const std::string& csv_path) {
  const auto f = load_map(read_map_file(path));
  const auto seq = degree_sequence(f, flags.n, flags.budget);
  AnalysisReport skeleton;
  skeleton.surface = f.surface;
  for (const auto& entry : seq.entries) {
    skeleton.degree_sequence.push_back(entry.entries);
  }
  const std::string csv = emit_degree_csv(skeleton);
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(csv_path);
    if (!out) throw input_error("cannot write CSV file: " + csv_path);
    out << csv;
  }
  if (seq.truncated) {
    std::cerr << "degree sequence truncated by the budget after "
              << seq.entries.size() << " of " << seq.requested << " iterates"
              << std::endl;
    return 3;
  }
  return 0;
}

int cmd_fiber_count(const std::string& path, const CommonFlags& flags) {
  const auto f = load_map(read_map_file(path));
  FiberCountConfig cfg;
  cfg.trials = flags.trials;
  cfg.seed = flags.seed;
  cfg.height = flags.height;
  std::cout << to_string(topological_degree(f, cfg)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Gallery: embedded map files with their expected invariants.

struct Check {
  std::string label;
  bool pass;
  std::string expected;
  std::string actual;
};

struct GalleryOutcome {
  std::string name;
  std::vector<Check> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

void check_eq(std::vector<Check>& out, const std::string& label,
              const std::string& expected, const std::string& actual) {
  out.push_back({label, expected == actual, expected, actual});
}

MapFile ex41_file() {
  MapFile file;
  file.surface = Surface::P2;
  file.components = {"x*z + y^2", "y*z + x^2", "x^2 + y^2"};
  return file;
}

MapFile ex42_file() {
  MapFile file;
  file.surface = Surface::P2;
  file.components = {"x^2*y + y^2*z", "x*y*z",
                     "x^2*y + x*y^2 + 2*y^2*z + z^2*(x + y)"};
  return file;
}

MapFile feps_map_file(const Rational& eps) {
  MapFile file;
  file.surface = Surface::P1xP1;
  file.components = {"t0*t1*w0*w1", "t0^2*w1^2 - eps*t1^2*w0^2",
                     "t0*w1*(t0*w0 - eps*t1*w1)",
                     "t0^2*w1^2 - (t0*w0 - t1*w1)^2"};
  file.parameters["eps"] = eps;
  return file;
}

MapFile power_file(unsigned d) {
  MapFile file;
  file.surface = Surface::P1xP1;
  const std::string e = std::to_string(d);
  file.components = {"t0^" + e, "t1^" + e, "w0", "w1"};
  return file;
}

Rational self_intersection(Surface s, const std::vector<Rational>& v) {
  const auto& lattice = builtin_lattice(s);
  Rational total(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      total += v[i] * Rational(lattice.form[i][j]) * v[j];
    }
  }
  return total;
}

GalleryOutcome run_gallery_entry(const std::string& name,
                                 const CommonFlags& flags) {
  GalleryOutcome outcome;
  outcome.name = name;
  auto& checks = outcome.checks;

  CommonFlags local = flags;
  MapFile file;
  if (name == "ex41") {
    file = ex41_file();
    local.n = 5;
  } else if (name == "ex42") {
    file = ex42_file();
    local.n = 4;
  } else if (name == "ex44") {
    file = feps_map_file(Rational(1));
    local.n = 3;
  } else if (name.rfind("power-", 0) == 0) {
    const std::string suffix = name.substr(6);
    if (suffix != "2" && suffix != "3" && suffix != "5") {
      throw input_error("unknown gallery entry: " + name);
    }
    file = power_file(static_cast<unsigned>(std::stoul(suffix)));
    local.n = 5;
  } else if (name.rfind("feps-", 0) == 0) {
    const std::string suffix = name.substr(5);
    if (suffix != "1" && suffix != "2" && suffix != "3" && suffix != "1/2") {
      throw input_error("unknown gallery entry: " + name);
    }
    file = feps_map_file(rational_from_string(suffix));
    local.n = 3;
  } else {
    throw input_error("unknown gallery entry: " + name);
  }

  const auto f = load_map(file);
  const auto report = build_analysis_report(f, to_options(local));
  const auto lambda_str = report.lambda_exact
                              ? to_string(*report.lambda_exact)
                              : "[" + report.lambda_bracket[0] + ", " +
                                    report.lambda_bracket[1] + "]";
  const auto rho_str =
      report.rho_exact ? to_string(*report.rho_exact) : "(interval)";

  if (name == "ex41") {
    check_eq(checks, "deg_top", "3", to_string(report.deg_top));
    check_eq(checks, "lambda", "2", lambda_str);
    std::string degrees;
    for (std::size_t i = 0; i < report.degree_sequence.size(); ++i) {
      degrees += (i ? "," : "") + to_string(report.degree_sequence[i][0][0]);
    }
    check_eq(checks, "degree_sequence", "2,4,8,16,32", degrees);
    check_eq(checks, "stable_up_to", "5",
             std::to_string(report.stability_verified_up_to));
    check_eq(checks, "regular_geometric", "no",
             report.is_regular_geometric ? "yes" : "no");
    check_eq(checks, "regularity_consistent", "yes",
             report.regularity_consistent ? "yes" : "no");
    check_eq(checks, "entropy_bound_log3", "1.09861228866811",
             report.entropy_upper_bound_log);
  } else if (name == "ex42") {
    check_eq(checks, "deg_top", "4", to_string(report.deg_top));
    check_eq(checks, "lambda", "3", lambda_str);
    check_eq(checks, "lambda_sq_vs_deg", ">", report.comparison);
    check_eq(checks, "entropy_bound_log4", "1.38629436111989",
             report.entropy_upper_bound_log);
  } else if (name == "ex44") {
    check_eq(checks, "pullback_matrix", "[[2, 2], [2, 2]]",
             render_matrix(report.pullback_matrix));
    check_eq(checks, "rho", "4", rho_str);
    std::string perron = "(interval)";
    if (report.perron_is_exact) {
      perron = report.perron_exact_entries[0];
      for (std::size_t i = 1; i < report.perron_exact_entries.size(); ++i) {
        perron += "," + report.perron_exact_entries[i];
      }
    }
    check_eq(checks, "perron_vector", "1,1", perron);
    check_eq(checks, "cone_certified", "yes",
             report.cone_certified ? "yes" : "no");
    if (report.perron_is_exact) {
      std::vector<Rational> v;
      for (const auto& s : report.perron_exact_entries) {
        v.push_back(rational_from_string(s));
      }
      check_eq(checks, "perron_self_intersection", "2",
               to_string(self_intersection(report.surface, v)));
    }
    check_eq(checks, "deg_top", "8", to_string(report.deg_top));
    check_eq(checks, "lambda", "4", lambda_str);
    check_eq(checks, "rank_f_star", "1", to_string(report.rank_f_star));
    check_eq(checks, "trace_f_star", "4", to_string(report.trace_f_star));
    check_eq(checks, "entropy_bound_log8", "2.07944154167984",
             report.entropy_upper_bound_log);
  } else if (name.rfind("power-", 0) == 0) {
    const std::string d = name.substr(6);
    check_eq(checks, "pullback_matrix",
             "[[" + d + ", 0], [0, 1]]", render_matrix(report.pullback_matrix));
    check_eq(checks, "rho", d, rho_str);
    std::string perron = "(interval)";
    if (report.perron_is_exact) {
      perron = report.perron_exact_entries[0] + "," +
               report.perron_exact_entries[1];
    }
    check_eq(checks, "perron_vector", "1,0", perron);
    if (report.perron_is_exact) {
      std::vector<Rational> v;
      for (const auto& s : report.perron_exact_entries) {
        v.push_back(rational_from_string(s));
      }
      check_eq(checks, "perron_self_intersection", "0",
               to_string(self_intersection(report.surface, v)));
    }
    check_eq(checks, "regular_geometric", "yes",
             report.is_regular_geometric ? "yes" : "no");
    check_eq(checks, "deg_top", d, to_string(report.deg_top));
    check_eq(checks, "lambda", d, lambda_str);
    // Projection formula: (f*H . f*H) = deg_top * (H . H).
    {
      const auto& lattice = builtin_lattice(report.surface);
      std::vector<Rational> pulled(2, Rational(0));
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          pulled[i] += Rational(report.pullback_matrix[i][j]) *
                       Rational(lattice.ample[j]);
        }
      }
      std::vector<Rational> ample{Rational(lattice.ample[0]),
                                  Rational(lattice.ample[1])};
      const Rational lhs = self_intersection(report.surface, pulled);
      const Rational rhs = Rational(report.deg_top) *
                           self_intersection(report.surface, ample);
      check_eq(checks, "projection_formula", to_string(rhs), to_string(lhs));
    }
    // The documented anomaly: regular, yet lambda^2 != deg_top.
    check_eq(checks, "regularity_consistent", "no",
             report.regularity_consistent ? "yes" : "no");
  } else {  // feps-*
    check_eq(checks, "base_scheme_length", "16",
             to_string(base_scheme_length_p1xp1(f)));
    check_eq(checks, "pullback_matrix", "[[2, 2], [2, 2]]",
             render_matrix(report.pullback_matrix));
    check_eq(checks, "deg_top", "8", to_string(report.deg_top));
    check_eq(checks, "lambda", "4", lambda_str);
  }
  return outcome;
}

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names{
      "ex41", "ex42", "ex44", "power-2", "power-3", "power-5", "feps-2"};
  return names;
}

int cmd_gallery(const std::string& name, const CommonFlags& flags,
                bool as_json) {
  std::vector<std::string> todo;
  if (name.empty()) {
    todo = gallery_names();
  } else {
    todo.push_back(name);
  }
  bool all_pass = true;
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& entry : todo) {
    const auto outcome = run_gallery_entry(entry, flags);
    all_pass = all_pass && outcome.passed();
    if (as_json) {
      nlohmann::ordered_json row;
      row["name"] = outcome.name;
      row["passed"] = outcome.passed();
      auto checks = nlohmann::ordered_json::array();
      for (const auto& c : outcome.checks) {
        checks.push_back({{"check", c.label},
                          {"pass", c.pass},
                          {"expected", c.expected},
                          {"actual", c.actual}});
      }
      row["checks"] = checks;
      doc.push_back(row);
    } else {
      for (const auto& c : outcome.checks) {
        if (c.pass) {
          std::cout << "PASS " << outcome.name << ": " << c.label << " = "
                    << c.actual << "\n";
        } else {
          std::cout << "FAIL " << outcome.name << ": " << c.label
                    << " (expected " << c.expected << ", got " << c.actual
                    << ")\n";
        }
      }
    }
  }
  if (as_json) std::cout << doc.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_family_scan(const std::string& path, const std::string& param,
                    const std::string& values_str, bool with_deg_top,
                    const CommonFlags& flags) {
  const auto values = parse_values(values_str);
  const auto file = read_map_file(path);
  for (const auto& var : variables_for(file.surface)) {
    if (var == param) {
      throw input_error("parameter '" + param + "' shadows a variable");
    }
  }
  const auto raw = [&file, &param](const Rational& v) {
    MapFile instance = file;
    instance.parameters[param] = v;
    return parse_components(instance);
  };
  FiberCountConfig cfg;
  cfg.trials = flags.trials;
  cfg.seed = flags.seed;
  cfg.height = flags.height;
  const auto table = family_scan(values, raw, with_deg_top, cfg);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::cout << param << " = " << to_string(values[i]) << ":";
    if (row.analyzed) {
      std::cout << " base length " << to_string(row.base_length) << ", matrix "
                << render_matrix(row.matrix);
      if (row.deg_top) std::cout << ", deg_top " << to_string(*row.deg_top);
    }
    if (row.degenerate) std::cout << " [degenerate: " << row.note << "]";
    if (!row.analyzed) std::cout << " [not analyzed: " << row.note << "]";
    std::cout << "\n";
  }
  std::cout << "base length constant across non-degenerate rows: "
            << (table.length_constant ? "yes" : "no") << "\n";
  std::cout << "pullback matrix constant across non-degenerate rows: "
            << (table.matrix_constant ? "yes" : "no") << "\n";
  return 0;
}

int cmd_invariance_check(const std::string& path, const std::string& family,
                         const std::string& values_str) {
  const auto values = parse_values(values_str);
  InvolutionFamily fam;
  if (family == "reciprocal") {
    fam = InvolutionFamily::Reciprocal;
  } else if (family == "scaling") {
    fam = InvolutionFamily::Scaling;
  } else {
    throw input_error("--family must be 'reciprocal' or 'scaling'");
  }
  const auto file = read_map_file(path);
  const auto f = load_map(file);
  std::optional<Rational> eps;
  const auto it = file.parameters.find("eps");
  if (it != file.parameters.end()) eps = it->second;
  const auto rows = involution_invariance_scan(f, fam, values, eps, true);
  for (const auto& row : rows) {
    std::cout << row.candidate << ": ";
    if (row.skipped) {
      std::cout << "skipped (" << row.note << ")";
    } else {
      std::cout << "invariant = " << (row.invariant ? "true" : "false");
      if (!row.note.empty()) std::cout << " [" << row.note << "]";
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "surfdyn: dynamical invariants of rational self-maps of P2 and P1xP1"};
  app.require_subcommand(1);

  CommonFlags flags;
  try {
    flags.seed = default_seed();
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string path;
  std::string csv_path;
  std::string gallery_name;
  std::string param = "eps";
  std::string values_str;
  std::string family;
  bool as_json = false;
  bool with_deg_top = false;

  auto add_fiber_flags = [&flags](CLI::App* cmd) {
    cmd->add_option("--trials", flags.trials, "fiber-count trials (>= 3)");
    cmd->add_option("--seed", flags.seed, "PRNG seed");
    cmd->add_option("--height", flags.height,
                    "coefficient height for random shears");
  };

  auto* analyze = app.add_subcommand("analyze", "full analysis of a map file");
  analyze->add_option("path", path, "map file (JSON)")->required();
  analyze->add_option("--n", flags.n, "degree-sequence length");
  analyze->add_option("--budget", flags.budget, "per-factor degree budget");
  analyze->add_option("--tolerance", flags.tolerance,
                      "spectral isolation width");
  analyze->add_flag("--json", as_json, "emit the JSON report");
  add_fiber_flags(analyze);

  auto* iterate = app.add_subcommand("iterate", "degree sequence as CSV");
  iterate->add_option("path", path, "map file (JSON)")->required();
  iterate->add_option("--n", flags.n, "degree-sequence length");
  iterate->add_option("--budget", flags.budget, "per-factor degree budget");
  iterate->add_option("--csv", csv_path, "write CSV to this file");

  auto* fiber = app.add_subcommand("fiber-count", "topological degree");
  fiber->add_option("path", path, "map file (JSON)")->required();
  add_fiber_flags(fiber);

  auto* gallery =
      app.add_subcommand("gallery", "run built-in examples against goldens");
  gallery->add_option("--name", gallery_name,
                      "one entry (default: the whole gallery)");
  gallery->add_flag("--json", as_json, "emit JSON outcomes");
  add_fiber_flags(gallery);

  auto* scan = app.add_subcommand("family-scan",
                                  "base length and matrix across a family");
  scan->add_option("path", path, "map file (JSON)")->required();
  scan->add_option("--param", param, "parameter name (default eps)");
  scan->add_option("--values", values_str, "comma-separated rationals")
      ->required();
  scan->add_flag("--deg-top", with_deg_top, "also fiber-count each member");
  add_fiber_flags(scan);

  auto* inv = app.add_subcommand("invariance-check",
                                 "Moebius involution invariance scan");
  inv->add_option("path", path, "map file (JSON)")->required();
  inv->add_option("--family", family, "reciprocal | scaling")->required();
  inv->add_option("--values", values_str, "comma-separated rationals")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (flags.n < 1) throw input_error("--n must be at least 1");
    if (analyze->parsed()) return cmd_analyze(path, flags, as_json);
    if (iterate->parsed()) return cmd_iterate(path, flags, csv_path);
    if (fiber->parsed()) return cmd_fiber_count(path, flags);
    if (gallery->parsed()) return cmd_gallery(gallery_name, flags, as_json);
    if (scan->parsed()) {
      return cmd_family_scan(path, param, values_str, with_deg_top, flags);
    }
    if (inv->parsed()) return cmd_invariance_check(path, family, values_str);
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const genericity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
