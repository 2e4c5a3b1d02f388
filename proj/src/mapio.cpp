#include "surfdyn/mapio.hpp"

#include <cctype>
#include <sstream>

#include "surfdyn/errors.hpp"
#include "surfdyn/spectral.hpp"

namespace surfdyn {

namespace {

using ordered = nlohmann::ordered_json;

constexpr std::uint64_t kMaxExponent = 65535;

struct Parser {
  const std::string& text;
  const std::vector<std::string>& vars;
  const std::map<std::string, Rational>& params;
  std::size_t split;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  SparsePoly constant(const Rational& v) const {
    return SparsePoly::constant(vars, v, split);
  }

  std::string read_digits(const char* what) {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos == start) throw parse_error(std::string("expected ") + what, pos);
    return text.substr(start, pos - start);
  }

  std::uint64_t parse_uint() {
    const std::size_t at = pos;
    const Int value(read_digits("an integer exponent"));
    if (value > kMaxExponent) throw parse_error("exponent too large", at);
    return value.get_ui();
  }

  Rational parse_rational_literal() {
    const Int num(read_digits("digits"));
    if (consume('/')) {
      const std::size_t at = pos;
      const Int den(read_digits("digits after '/'"));
      if (den == 0) throw parse_error("zero denominator", at);
      return make_rational(num, den);
    }
    return Rational(num);
  }

  std::string parse_identifier() {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_')) {
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  SparsePoly parse_atom() {
    skip_ws();
    if (pos >= text.size()) {
      throw parse_error("unexpected end of expression", pos);
    }
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      SparsePoly inner = parse_expr();
      if (!consume(')')) throw parse_error("expected ')'", pos);
      return inner;
    }
    if (c == '-') {
      ++pos;
      return -parse_atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return constant(parse_rational_literal());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos;
      const std::string id = parse_identifier();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == id) return SparsePoly::variable(vars, i, split);
      }
      const auto it = params.find(id);
      if (it != params.end()) return constant(it->second);
      throw parse_error("unknown identifier '" + id + "'", start);
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos);
  }

  SparsePoly parse_factor() {
    SparsePoly base = parse_atom();
    if (consume('^')) {
      std::uint64_t e = parse_uint();
      SparsePoly out = constant(Rational(1));
      while (e > 0) {  // square and multiply
        if (e & 1) out = out * base;
        e >>= 1;
        if (e > 0) base = base * base;
      }
      return out;
    }
    return base;
  }

  SparsePoly parse_term() {
    SparsePoly acc = parse_factor();
    while (consume('*')) acc = acc * parse_factor();
    return acc;
  }

  SparsePoly parse_expr() {
    SparsePoly acc = parse_term();
    for (;;) {
      if (consume('+')) {
        acc = acc + parse_term();
      } else if (consume('-')) {
        acc = acc - parse_term();
      } else {
        break;
      }
    }
    return acc;
  }
};

ordered int_json(const Int& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

Int int_from_json(const nlohmann::ordered_json& v, const char* what) {
  if (v.is_number_integer()) return Int(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return Int(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw input_error(std::string("report field '") + what +
                    "' is not an integer");
}

ordered matrix_json(const std::vector<std::vector<Int>>& m) {
  ordered rows = ordered::array();
  for (const auto& row : m) {
    ordered cells = ordered::array();
    for (const auto& z : row) cells.push_back(int_json(z));
    rows.push_back(cells);
  }
  return rows;
}

std::vector<std::vector<Int>> matrix_from_json(const ordered& v,
                                               const char* what) {
  if (!v.is_array()) {
    throw input_error(std::string("report field '") + what +
                      "' is not a matrix");
  }
  std::vector<std::vector<Int>> out;
  for (const auto& row : v) {
    if (!row.is_array()) {
      throw input_error(std::string("report field '") + what +
                        "' is not a matrix");
    }
    std::vector<Int> cells;
    for (const auto& cell : row) cells.push_back(int_from_json(cell, what));
    out.push_back(std::move(cells));
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

const ordered& field(const ordered& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) {
    throw input_error(std::string("report is missing field '") + name + "'");
  }
  return *it;
}

Int intersection_number(Surface s, const std::vector<std::vector<Int>>& m) {
  if (s == Surface::P2) return m[0][0];
  return m[0][0] + m[0][1] + m[1][0] + m[1][1];  // (1,1) against the swap form
}

}  // namespace

const std::vector<std::string>& variables_for(Surface s) {
  return s == Surface::P2 ? p2_variables() : p1xp1_variables();
}

std::size_t block_split_for(Surface s) {
  return s == Surface::P2 ? 0 : 2;
}

SparsePoly parse_expression(const std::string& text,
                            const std::vector<std::string>& variables,
                            const std::map<std::string, Rational>& parameters,
                            std::size_t block_split) {
  Parser parser{text, variables, parameters, block_split};
  SparsePoly out = parser.parse_expr();
  parser.skip_ws();
  if (parser.pos != text.size()) {
    throw parse_error(
        std::string("unexpected character '") + text[parser.pos] + "'",
        parser.pos);
  }
  return out;
}

MapFile map_file_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw input_error("map file must be a JSON object");
  MapFile file;
  const auto surf = j.find("surface");
  if (surf == j.end() || !surf->is_string()) {
    throw input_error("map file needs a \"surface\" string");
  }
  file.surface = surface_from_name(surf->get<std::string>());

  const auto comps = j.find("components");
  if (comps == j.end() || !comps->is_array()) {
    throw input_error("map file needs a \"components\" array");
  }
  if (file.surface == Surface::P2) {
    if (comps->size() != 3) {
      throw input_error("P2 maps take exactly 3 component expressions");
    }
    for (const auto& c : *comps) {
      if (!c.is_string()) throw input_error("components must be strings");
      file.components.push_back(c.get<std::string>());
    }
  } else {
    if (comps->size() != 2) {
      throw input_error("P1xP1 maps take two pairs of component expressions");
    }
    for (const auto& pair : *comps) {
      if (!pair.is_array() || pair.size() != 2) {
        throw input_error("P1xP1 maps take two pairs of component expressions");
      }
      for (const auto& c : pair) {
        if (!c.is_string()) throw input_error("components must be strings");
        file.components.push_back(c.get<std::string>());
      }
    }
  }

  const auto params = j.find("parameters");
  if (params != j.end()) {
    if (!params->is_object()) {
      throw input_error("\"parameters\" must map names to rational strings");
    }
    for (const auto& [name, value] : params->items()) {
      Rational parsed;
      if (value.is_string()) {
        parsed = rational_from_string(value.get<std::string>());
      } else if (value.is_number_integer()) {
        parsed = Rational(Int(value.get<std::int64_t>()));
      } else {
        throw input_error("parameter '" + name +
                          "' must be a rational string");
      }
      for (const auto& var : variables_for(file.surface)) {
        if (var == name) {
          throw input_error("parameter '" + name + "' shadows a variable");
        }
      }
      file.parameters.emplace(name, parsed);
    }
  }
  return file;
}

nlohmann::json map_file_to_json(const MapFile& file) {
  nlohmann::json j;
  j["surface"] = surface_name(file.surface);
  if (file.surface == Surface::P2) {
    j["components"] = file.components;
  } else {
    auto pairs = nlohmann::json::array();
    pairs.push_back(
        nlohmann::json::array({file.components[0], file.components[1]}));
    pairs.push_back(
        nlohmann::json::array({file.components[2], file.components[3]}));
    j["components"] = pairs;
  }
  if (!file.parameters.empty()) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, value] : file.parameters) {
      params[name] = to_string(value);
    }
    j["parameters"] = params;
  }
  return j;
}

std::vector<SparsePoly> parse_components(const MapFile& file) {
  const auto& vars = variables_for(file.surface);
  const std::size_t split = block_split_for(file.surface);
  std::vector<SparsePoly> out;
  for (const auto& text : file.components) {
    out.push_back(parse_expression(text, vars, file.parameters, split));
  }
  return out;
}

RationalSelfMap load_map(const MapFile& file) {
  return make_map(file.surface, parse_components(file));
}

AnalysisReport build_analysis_report(const RationalSelfMap& f,
                                     const AnalyzeOptions& opt) {
  AnalysisReport r;
  r.surface = f.surface;
  if (f.surface == Surface::P2) {
    r.algebraic_degree = algebraic_degree(f);
  } else {
    for (const auto& [a, b] : factor_bidegrees(f)) {
      r.bidegree_matrix.push_back({Int(a), Int(b)});
    }
  }

  const auto seq = degree_sequence(f, opt.n, opt.budget);
  r.truncated = seq.truncated;
  r.stability_verified_up_to = seq.stable_up_to;
  for (const auto& entry : seq.entries) r.degree_sequence.push_back(entry.entries);

  const auto& m1 = seq.entries.front();
  r.pullback_matrix = m1.entries;
  const auto spectrum = analyze_spectrum(m1, opt.tolerance);
  r.char_poly = spectrum.char_poly;
  r.rho_exact = spectrum.rho_exact;
  r.rho_interval = {decimal_string(spectrum.rho_lo, Round::Down),
                    decimal_string(spectrum.rho_hi, Round::Up)};
  r.perron_is_exact = !spectrum.perron_exact.empty();
  for (const auto& v : spectrum.perron_exact) {
    r.perron_exact_entries.push_back(to_string(v));
  }
  for (const auto& [lo, hi] : spectrum.perron_interval) {
    r.perron_interval_entries.push_back({decimal_string(lo, Round::Down),
                                         decimal_string(hi, Round::Up)});
  }
  r.cone_certified = spectrum.cone_certified;

  r.deg_top = topological_degree(f, opt.fiber);
  const auto dd = dynamical_degree(f, seq, opt.tolerance, r.deg_top);
  r.lambda_exact = dd.lambda_exact;
  r.lambda_bracket = {to_string(dd.lo), to_string(dd.hi)};
  r.method = dd.method;
  r.fekete_n = dd.fekete_n;
  r.fekete_upper = dd.fekete_upper;
  r.point_estimate = dd.point_estimate;
  r.empirical_c = dd.empirical_c;

  switch (log_concavity_check(dd, r.deg_top)) {
    case Comparison::Less: r.comparison = "<"; break;
    case Comparison::Equal: r.comparison = "="; break;
    case Comparison::Greater: r.comparison = ">"; break;
    case Comparison::Indeterminate: r.comparison = "indeterminate"; break;
  }

  const auto reg = regularity_report(f, dd, r.deg_top);
  r.is_regular_geometric = reg.is_regular_geometric;
  r.regularity_consistent = reg.consistent;

  const auto [rank, trace] = rank_and_trace(m1);
  r.rank_f_star = Int(static_cast<unsigned long>(rank));
  r.trace_f_star = trace;
  r.entropy_upper_bound_log = entropy_bound(dd, r.deg_top);
  return r;
}

nlohmann::ordered_json report_to_json(const AnalysisReport& r) {
  ordered j;
  j["surface"] = surface_name(r.surface);
  if (r.surface == Surface::P2) {
    j["algebraic_degree"] = int_json(r.algebraic_degree.value_or(Int(0)));
  } else {
    j["bidegree_matrix"] = matrix_json(r.bidegree_matrix);
  }
  j["pullback_matrix"] = matrix_json(r.pullback_matrix);
  ordered cp = ordered::array();
  for (const auto& c : r.char_poly) cp.push_back(int_json(c));
  j["char_poly"] = cp;
  j["spectral_radius"] = {
      {"exact", r.rho_exact ? ordered(to_string(*r.rho_exact)) : ordered()},
      {"interval", {r.rho_interval[0], r.rho_interval[1]}}};
  ordered perron_entries = ordered::array();
  if (r.perron_is_exact) {
    for (const auto& v : r.perron_exact_entries) perron_entries.push_back(v);
  } else {
    for (const auto& [lo, hi] : r.perron_interval_entries) {
      perron_entries.push_back({lo, hi});
    }
  }
  j["perron_vector"] = {{"exact", r.perron_is_exact},
                        {"entries", perron_entries},
                        {"cone_certified", r.cone_certified}};
  j["deg_top"] = int_json(r.deg_top);
  j["lambda"] = {
      {"exact",
       r.lambda_exact ? ordered(to_string(*r.lambda_exact)) : ordered()},
      {"bracket", {r.lambda_bracket[0], r.lambda_bracket[1]}},
      {"method", r.method},
      {"fekete_n", r.fekete_n},
      {"fekete_upper", r.fekete_upper},
      {"point_estimate", r.point_estimate},
      {"empirical_c",
       r.empirical_c ? ordered(to_string(*r.empirical_c)) : ordered()}};
  ordered lambda_sq;
  if (r.lambda_exact) {
    lambda_sq = to_string(*r.lambda_exact * *r.lambda_exact);
  } else {
    const Rational lo = rational_from_string(r.lambda_bracket[0]);
    const Rational hi = rational_from_string(r.lambda_bracket[1]);
    lambda_sq = ordered::array({to_string(lo * lo), to_string(hi * hi)});
  }
  j["lambda_sq_vs_deg"] = {{"lambda_sq", lambda_sq},
                           {"deg_top", int_json(r.deg_top)},
                           {"comparison", r.comparison}};
  j["is_regular_geometric"] = r.is_regular_geometric;
  j["regularity_consistent"] = r.regularity_consistent;
  j["rank_f_star"] = int_json(r.rank_f_star);
  j["trace_f_star"] = int_json(r.trace_f_star);
  j["entropy_upper_bound_log"] = r.entropy_upper_bound_log;
  ordered rows = ordered::array();
  for (std::size_t i = 0; i < r.degree_sequence.size(); ++i) {
    ordered row;
    row["n"] = i + 1;
    if (r.surface == Surface::P2) {
      row["degree"] = int_json(r.degree_sequence[i][0][0]);
    } else {
      row["matrix"] = matrix_json(r.degree_sequence[i]);
    }
    rows.push_back(row);
  }
  j["degree_sequence"] = rows;
  j["stability_verified_up_to"] = r.stability_verified_up_to;
  j["truncated"] = r.truncated;
  return j;
}

AnalysisReport report_from_json(const nlohmann::ordered_json& j) {
  AnalysisReport r;
  r.surface = surface_from_name(field(j, "surface").get<std::string>());
  if (r.surface == Surface::P2) {
    r.algebraic_degree = int_from_json(field(j, "algebraic_degree"),
                                       "algebraic_degree");
  } else {
    r.bidegree_matrix = matrix_from_json(field(j, "bidegree_matrix"),
                                         "bidegree_matrix");
  }
  r.pullback_matrix = matrix_from_json(field(j, "pullback_matrix"),
                                       "pullback_matrix");
  for (const auto& c : field(j, "char_poly")) {
    r.char_poly.push_back(int_from_json(c, "char_poly"));
  }
  const auto& rho = field(j, "spectral_radius");
  if (!field(rho, "exact").is_null()) {
    r.rho_exact = rational_from_string(field(rho, "exact").get<std::string>());
  }
  r.rho_interval = {field(rho, "interval").at(0).get<std::string>(),
                    field(rho, "interval").at(1).get<std::string>()};
  const auto& perron = field(j, "perron_vector");
  r.perron_is_exact = field(perron, "exact").get<bool>();
  for (const auto& entry : field(perron, "entries")) {
    if (r.perron_is_exact) {
      r.perron_exact_entries.push_back(entry.get<std::string>());
    } else {
      r.perron_interval_entries.push_back(
          {entry.at(0).get<std::string>(), entry.at(1).get<std::string>()});
    }
  }
  r.cone_certified = field(perron, "cone_certified").get<bool>();
  r.deg_top = int_from_json(field(j, "deg_top"), "deg_top");
  const auto& lambda = field(j, "lambda");
  if (!field(lambda, "exact").is_null()) {
    r.lambda_exact =
        rational_from_string(field(lambda, "exact").get<std::string>());
  }
  r.lambda_bracket = {field(lambda, "bracket").at(0).get<std::string>(),
                      field(lambda, "bracket").at(1).get<std::string>()};
  r.method = field(lambda, "method").get<std::string>();
  r.fekete_n = field(lambda, "fekete_n").get<std::uint64_t>();
  r.fekete_upper = field(lambda, "fekete_upper").get<std::string>();
  r.point_estimate = field(lambda, "point_estimate").get<std::string>();
  if (!field(lambda, "empirical_c").is_null()) {
    r.empirical_c =
        rational_from_string(field(lambda, "empirical_c").get<std::string>());
  }
  r.comparison =
      field(field(j, "lambda_sq_vs_deg"), "comparison").get<std::string>();
  r.is_regular_geometric = field(j, "is_regular_geometric").get<bool>();
  r.regularity_consistent = field(j, "regularity_consistent").get<bool>();
  r.rank_f_star = int_from_json(field(j, "rank_f_star"), "rank_f_star");
  r.trace_f_star = int_from_json(field(j, "trace_f_star"), "trace_f_star");
  r.entropy_upper_bound_log =
      field(j, "entropy_upper_bound_log").get<std::string>();
  for (const auto& row : field(j, "degree_sequence")) {
    if (r.surface == Surface::P2) {
      r.degree_sequence.push_back({{int_from_json(field(row, "degree"),
                                                  "degree_sequence")}});
    } else {
      r.degree_sequence.push_back(
          matrix_from_json(field(row, "matrix"), "degree_sequence"));
    }
  }
  r.stability_verified_up_to =
      field(j, "stability_verified_up_to").get<std::uint64_t>();
  r.truncated = field(j, "truncated").get<bool>();
  return r;
}

std::string emit_report_json(const AnalysisReport& r) {
  return report_to_json(r).dump(2) + "\n";
}

std::string emit_report_human(const AnalysisReport& r) {
  std::ostringstream out;
  out << "surface: " << surface_name(r.surface) << "\n";
  if (r.surface == Surface::P2) {
    out << "algebraic degree: " << to_string(r.algebraic_degree.value_or(Int(0)))
        << "\n";
  } else {
    out << "bidegree matrix: " << render_matrix(r.bidegree_matrix) << "\n";
  }
  out << "pullback matrix: " << render_matrix(r.pullback_matrix) << "\n";
  out << "char poly (ascending): [";
  for (std::size_t i = 0; i < r.char_poly.size(); ++i) {
    if (i) out << ", ";
    out << to_string(r.char_poly[i]);
  }
  out << "]\n";
  if (r.rho_exact) {
    out << "spectral radius: " << to_string(*r.rho_exact) << " (exact)\n";
  } else {
    out << "spectral radius: in [" << r.rho_interval[0] << ", "
        << r.rho_interval[1] << "]\n";
  }
  out << "perron vector: [";
  if (r.perron_is_exact) {
    for (std::size_t i = 0; i < r.perron_exact_entries.size(); ++i) {
      if (i) out << ", ";
      out << r.perron_exact_entries[i];
    }
  } else {
    for (std::size_t i = 0; i < r.perron_interval_entries.size(); ++i) {
      if (i) out << ", ";
      out << "[" << r.perron_interval_entries[i][0] << ", "
          << r.perron_interval_entries[i][1] << "]";
    }
  }
  out << "]" << (r.cone_certified ? " (cone-certified)" : "") << "\n";
  out << "deg top: " << to_string(r.deg_top) << "\n";
  if (r.lambda_exact) {
    out << "lambda: " << to_string(*r.lambda_exact) << " (exact; method "
        << r.method << ")\n";
  } else {
    out << "lambda: in [" << r.lambda_bracket[0] << ", " << r.lambda_bracket[1]
        << "] (method " << r.method << ")\n";
  }
  out << "fekete upper bound (n=" << r.fekete_n << "): " << r.fekete_upper
      << "\n";
  out << "point estimate: " << r.point_estimate << "\n";
  if (r.empirical_c) {
    out << "empirical growth constant: " << to_string(*r.empirical_c) << "\n";
  }
  out << "lambda^2 vs deg top: " << r.comparison << "\n";
  out << "regular (geometric): " << (r.is_regular_geometric ? "yes" : "no")
      << "\n";
  out << "regularity consistent: " << (r.regularity_consistent ? "yes" : "no")
      << "\n";
  out << "rank f*: " << to_string(r.rank_f_star) << "\n";
  out << "trace f*: " << to_string(r.trace_f_star) << "\n";
  out << "entropy upper bound (log): " << r.entropy_upper_bound_log << "\n";
  out << "degree sequence:";
  for (std::size_t i = 0; i < r.degree_sequence.size(); ++i) {
    out << (i ? "; " : " ");
    if (r.surface == Surface::P2) {
      out << to_string(r.degree_sequence[i][0][0]);
    } else {
      out << render_matrix(r.degree_sequence[i]);
    }
  }
  out << "\n";
  out << "stable up to: " << r.stability_verified_up_to << "\n";
  out << "truncated: " << (r.truncated ? "yes" : "no") << "\n";
  return out.str();
}

std::string emit_degree_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "n,d11,d12,d21,d22,lambda_upper_n\n";
  for (std::size_t i = 0; i < r.degree_sequence.size(); ++i) {
    const auto& m = r.degree_sequence[i];
    out << (i + 1) << ",";
    if (r.surface == Surface::P2) {
      out << to_string(m[0][0]) << ",,,,";
    } else {
      out << to_string(m[0][0]) << "," << to_string(m[0][1]) << ","
          << to_string(m[1][0]) << "," << to_string(m[1][1]) << ",";
    }
    const Int s = intersection_number(r.surface, m);
    out << nth_root_decimal_string(Rational(s), i + 1, Round::Up) << "\n";
  }
  return out.str();
}

}  // namespace surfdyn
