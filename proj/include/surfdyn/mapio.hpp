#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "surfdyn/dynamics.hpp"
#include "surfdyn/poly.hpp"
#include "surfdyn/ratmap.hpp"

namespace surfdyn {

// Fixed variable lists (x, y, z / t0, t1, w0, w1; see ratmap for the
// definitions) keyed by surface.
const std::vector<std::string>& variables_for(Surface s);
std::size_t block_split_for(Surface s);  // 0 for P2, 2 for P1xP1

// Recursive-descent parser for the expression grammar
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := rational | variable | parameter | '(' expr ')' | '-' atom
// with no implicit multiplication. Parameters are substituted by their exact
// values during parsing. Throws parse_error (with a 0-based position) on
// malformed input and on unknown identifiers.
SparsePoly parse_expression(
    const std::string& text, const std::vector<std::string>& variables,
    const std::map<std::string, Rational>& parameters = {},
    std::size_t block_split = 0);

// A map-definition document: {"surface": "P2"|"P1xP1", "components": [...],
// "parameters": {name: rational-string}}. P2 components are three expression
// strings; P1xP1 components are two pairs of expression strings (stored here
// flattened pair-major: p0, p1, q0, q1).
struct MapFile {
  Surface surface = Surface::P2;
  std::vector<std::string> components;
  std::map<std::string, Rational> parameters;
};

MapFile map_file_from_json(const nlohmann::json& j);
nlohmann::json map_file_to_json(const MapFile& file);

// Components exactly as parsed, before any normalization.
std::vector<SparsePoly> parse_components(const MapFile& file);

// Parse, validate the grading, normalize. Errors: parse_error for bad
// expressions; input_error for inhomogeneous or degenerate components.
RationalSelfMap load_map(const MapFile& file);

// Everything the analyze pipeline produces, held in the exact shapes the
// JSON report uses (rationals exact, decimals pre-rendered) so that a report
// round-trips through its serialization unchanged.
struct AnalysisReport {
  Surface surface = Surface::P2;
  std::optional<Int> algebraic_degree;            // P2 only
  std::vector<std::vector<Int>> bidegree_matrix;  // P1xP1 only, rows (a_i, b_i)
  std::vector<std::vector<Int>> pullback_matrix;
  std::vector<Int> char_poly;  // ascending, monic
  std::optional<Rational> rho_exact;
  std::array<std::string, 2> rho_interval;  // decimal strings, outward
  bool perron_is_exact = false;
  std::vector<std::string> perron_exact_entries;
  std::vector<std::array<std::string, 2>> perron_interval_entries;
  bool cone_certified = false;
  Int deg_top = 0;
  std::optional<Rational> lambda_exact;
  std::array<std::string, 2> lambda_bracket;  // exact rational strings
  std::string method;
  std::uint64_t fekete_n = 0;
  std::string fekete_upper;
  std::string point_estimate;
  std::optional<Rational> empirical_c;
  std::string comparison;  // "<", "=", ">", "indeterminate"
  bool is_regular_geometric = false;
  bool regularity_consistent = false;
  Int rank_f_star = 0;
  Int trace_f_star = 0;
  std::string entropy_upper_bound_log;
  std::vector<std::vector<std::vector<Int>>> degree_sequence;  // matrix per n
  std::uint64_t stability_verified_up_to = 0;
  bool truncated = false;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) =
      default;
};

struct AnalyzeOptions {
  unsigned n = 5;
  std::uint64_t budget = default_degree_budget();
  FiberCountConfig fiber;
  Rational tolerance = default_tolerance();
};

// Runs the full pipeline: degree sequence, spectrum of the first pullback,
// fiber count, dynamical degree, comparisons, regularity, entropy bound.
AnalysisReport build_analysis_report(const RationalSelfMap& f,
                                     const AnalyzeOptions& opt = {});

nlohmann::ordered_json report_to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::ordered_json& j);

std::string emit_report_json(const AnalysisReport& r);   // dump + newline
std::string emit_report_human(const AnalysisReport& r);  // key: value lines
// CSV with columns n, d11, d12, d21, d22, lambda_upper_n; P2 fills d11 only.
// lambda_upper_n is the exact n-th root s_n^(1/n) rounded up, 15 digits.
std::string emit_degree_csv(const AnalysisReport& r);

}  // namespace surfdyn
