#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surfdyn/errors.hpp"
#include "surfdyn/mapio.hpp"
#include "surfdyn/spectral.hpp"

namespace py = pybind11;
using namespace surfdyn;

namespace {

py::object py_int(const Int& z) {
  return py::reinterpret_steal<py::object>(
      PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

py::list py_matrix(const std::vector<std::vector<Int>>& m) {
  py::list rows;
  for (const auto& row : m) {
    py::list cells;
    for (const auto& z : row) cells.append(py_int(z));
    rows.append(cells);
  }
  return rows;
}

Rational rational_arg(const py::object& value, const char* what) {
  if (py::isinstance<py::int_>(value)) {
    return rational_from_string(py::str(value).cast<std::string>());
  }
  if (py::isinstance<py::str>(value)) {
    return rational_from_decimal_string(value.cast<std::string>());
  }
  throw input_error(std::string(what) +
                    " must be an int or a rational/decimal string");
}

std::map<std::string, Rational> parameters_arg(const py::dict& params) {
  std::map<std::string, Rational> out;
  for (const auto& [key, value] : params) {
    out.emplace(key.cast<std::string>(),
                rational_arg(py::reinterpret_borrow<py::object>(value),
                             "parameter value"));
  }
  return out;
}

RationalSelfMap map_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("map document is not valid JSON: ") +
                      e.what());
  }
  return load_map(map_file_from_json(j));
}

AnalyzeOptions make_options(unsigned n, unsigned trials, std::uint64_t seed,
                            std::uint32_t height, std::uint64_t budget,
                            const std::string& tolerance) {
  AnalyzeOptions opt;
  opt.n = n;
  opt.budget = budget;
  opt.tolerance = rational_from_decimal_string(tolerance);
  opt.fiber.trials = trials;
  opt.fiber.seed = seed;
  opt.fiber.height = height;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact dynamical invariants of rational self-maps of P2 and P1xP1";

  // Translators run newest-first, so register the base class before the
  // derived ones.
  auto& error_exc = py::register_exception<error>(m, "Error", PyExc_RuntimeError);
  const py::tuple value_bases = py::make_tuple(
      error_exc, py::reinterpret_borrow<py::object>(PyExc_ValueError));
  py::register_exception<genericity_error>(m, "GenericityError", error_exc);
  py::register_exception<budget_error>(m, "BudgetError", error_exc);
  py::register_exception<precondition_error>(m, "PreconditionError",
                                             value_bases);
  py::register_exception<input_error>(m, "InputError", value_bases);

  py::class_<RationalSelfMap>(m, "Map")
      .def_property_readonly(
          "surface",
          [](const RationalSelfMap& f) { return surface_name(f.surface); })
      .def_property_readonly("components",
                             [](const RationalSelfMap& f) {
                               py::list out;
                               for (const auto& c : f.components)
                                 out.append(render(c));
                               return out;
                             })
      .def("algebraic_degree",
           [](const RationalSelfMap& f) {
             return py_int(Int(algebraic_degree(f)));
           })
      .def("factor_bidegrees",
           [](const RationalSelfMap& f) {
             py::list out;
             for (const auto& [a, b] : factor_bidegrees(f)) {
               out.append(py::make_tuple(a, b));
             }
             return out;
           })
      .def("pullback_matrix",
           [](const RationalSelfMap& f) {
             return py_matrix(pullback_matrix(f));
           })
      .def("base_scheme_length",
           [](const RationalSelfMap& f) {
             return py_int(base_scheme_length_p1xp1(f));
           })
      .def("is_regular", &is_regular)
      .def("compose",
           [](const RationalSelfMap& f, const RationalSelfMap& g) {
             return compose(f, g);
           })
      .def("__eq__",
           [](const RationalSelfMap& f, const RationalSelfMap& g) {
             return maps_equal(f, g);
           })
      .def("__repr__", [](const RationalSelfMap& f) {
        std::string out = "<surfdyn.Map " + surface_name(f.surface) + " [";
        for (std::size_t i = 0; i < f.components.size(); ++i) {
          if (i) out += ", ";
          out += render(f.components[i]);
        }
        return out + "]>";
      });

  m.def("load_map_json", &map_from_json_text, py::arg("text"),
        "Load a map from a JSON map-file document.");

  m.def(
      "parse_expression",
      [](const std::string& text, const std::string& surface,
         const py::dict& parameters) {
        const Surface s = surface_from_name(surface);
        return render(parse_expression(text, variables_for(s),
                                       parameters_arg(parameters),
                                       block_split_for(s)));
      },
      py::arg("text"), py::arg("surface") = "P2",
      py::arg("parameters") = py::dict(),
      "Parse an expression and return its canonical rendering.");

  m.def(
      "iterate",
      [](const RationalSelfMap& f, unsigned n, std::uint64_t budget) {
        return iterate(f, n, budget);
      },
      py::arg("map"), py::arg("n"), py::arg("budget") = default_degree_budget(),
      "Normalized iterates [f^1, ..., f^n]; raises BudgetError when a factor "
      "degree would exceed the budget.");

  m.def(
      "degree_sequence",
      [](const RationalSelfMap& f, unsigned n, std::uint64_t budget) {
        const auto seq = degree_sequence(f, n, budget);
        py::list matrices;
        for (const auto& entry : seq.entries)
          matrices.append(py_matrix(entry.entries));
        py::list inter;
        for (const auto& s : sequence_intersections(seq))
          inter.append(py_int(s));
        py::dict out;
        out["matrices"] = matrices;
        out["intersections"] = inter;
        out["stable_up_to"] = seq.stable_up_to;
        out["truncated"] = seq.truncated;
        return out;
      },
      py::arg("map"), py::arg("n") = 5,
      py::arg("budget") = default_degree_budget());

  m.def(
      "topological_degree",
      [](const RationalSelfMap& f, unsigned trials, std::uint64_t seed,
         std::uint32_t height) {
        FiberCountConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.height = height;
        return py_int(topological_degree(f, cfg));
      },
      py::arg("map"), py::arg("trials") = 3, py::arg("seed") = 0,
      py::arg("height") = 100);

  m.def(
      "dynamical_degree",
      [](const RationalSelfMap& f, unsigned n, std::uint64_t budget,
         const std::string& tolerance, const py::object& deg_top) {
        const auto seq = degree_sequence(f, n, budget);
        std::optional<Int> hint;
        if (!deg_top.is_none()) {
          hint = Int(py::str(deg_top).cast<std::string>());
        }
        const auto dd = dynamical_degree(
            f, seq, rational_from_decimal_string(tolerance), hint);
        py::dict out;
        out["lambda_exact"] = dd.lambda_exact
                                  ? py::object(py::str(to_string(*dd.lambda_exact)))
                                  : py::object(py::none());
        out["lo"] = to_string(dd.lo);
        out["hi"] = to_string(dd.hi);
        out["method"] = dd.method;
        out["fekete_n"] = dd.fekete_n;
        out["fekete_upper"] = dd.fekete_upper;
        out["point_estimate"] = dd.point_estimate;
        out["empirical_c"] = dd.empirical_c
                                 ? py::object(py::str(to_string(*dd.empirical_c)))
                                 : py::object(py::none());
        return out;
      },
      py::arg("map"), py::arg("n") = 5,
      py::arg("budget") = default_degree_budget(),
      py::arg("tolerance") = "1e-12", py::arg("deg_top") = py::none());

  m.def(
      "analyze_json",
      [](const RationalSelfMap& f, unsigned n, unsigned trials,
         std::uint64_t seed, std::uint32_t height, std::uint64_t budget,
         const std::string& tolerance) {
        return emit_report_json(build_analysis_report(
            f, make_options(n, trials, seed, height, budget, tolerance)));
      },
      py::arg("map"), py::arg("n") = 5, py::arg("trials") = 3,
      py::arg("seed") = 0, py::arg("height") = 100,
      py::arg("budget") = default_degree_budget(),
      py::arg("tolerance") = "1e-12",
      "Full analysis report as a JSON string.");
}
