#include "surfdyn/surface.hpp"

#include <utility>

#include "surfdyn/errors.hpp"

namespace surfdyn {

namespace {

std::vector<Int> int_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw input_error(std::string(what) + " must be an array");
  std::vector<Int> out;
  for (const auto& entry : j) {
    if (!entry.is_number_integer()) {
      throw input_error(std::string(what) + " entries must be integers");
    }
    out.emplace_back(static_cast<long>(entry.get<std::int64_t>()));
  }
  return out;
}

void validate(const NSLattice& lat) {
  const auto r = static_cast<std::size_t>(lat.rank);
  if (lat.rank <= 0) throw input_error("lattice rank must be positive");
  if (lat.form.size() != r) throw input_error("intersection form size does not match rank");
  for (const auto& row : lat.form) {
    if (row.size() != r) throw input_error("intersection form must be square");
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      if (lat.form[i][j] != lat.form[j][i]) {
        throw input_error("intersection form must be symmetric");
      }
    }
  }
  if (lat.nef_generators.empty()) throw input_error("lattice needs at least one nef generator");
  for (const auto& g : lat.nef_generators) {
    if (g.size() != r) throw input_error("nef generator length does not match rank");
  }
  if (lat.ample.size() != r) throw input_error("ample class length does not match rank");
}

}  // namespace

std::string surface_name(Surface s) { return s == Surface::P2 ? "P2" : "P1xP1"; }

Surface surface_from_name(const std::string& name) {
  if (name == "P2") return Surface::P2;
  if (name == "P1xP1") return Surface::P1xP1;
  throw input_error("unknown surface \"" + name + "\" (expected P2 or P1xP1)");
}

const NSLattice& p2_lattice() {
  static const NSLattice lat{1, {{1}}, {{1}}, {1}};
  return lat;
}

const NSLattice& p1xp1_lattice() {
  static const NSLattice lat{2, {{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}, {1, 1}};
  return lat;
}

const NSLattice& builtin_lattice(Surface s) {
  return s == Surface::P2 ? p2_lattice() : p1xp1_lattice();
}

NSLattice lattice_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw input_error("lattice description must be a JSON object");
  for (const char* key : {"rank", "form", "nef_generators", "ample"}) {
    if (!j.contains(key)) throw input_error(std::string("lattice is missing \"") + key + "\"");
  }
  if (!j["rank"].is_number_integer()) throw input_error("lattice rank must be an integer");
  NSLattice lat;
  lat.rank = j["rank"].get<int>();
  if (!j["form"].is_array()) throw input_error("form must be an array of rows");
  for (const auto& row : j["form"]) lat.form.push_back(int_vector(row, "form row"));
  if (!j["nef_generators"].is_array()) throw input_error("nef_generators must be an array");
  for (const auto& g : j["nef_generators"]) {
    lat.nef_generators.push_back(int_vector(g, "nef generator"));
  }
  lat.ample = int_vector(j["ample"], "ample");
  validate(lat);
  return lat;
}

DivisorClass divisor(const NSLattice& lattice, QVector coords) {
  if (coords.size() != static_cast<std::size_t>(lattice.rank)) {
    throw precondition_error("divisor coordinate length does not match lattice rank");
  }
  return DivisorClass{&lattice, std::move(coords)};
}

DivisorClass ample_class(const NSLattice& lattice) {
  QVector coords;
  for (const auto& c : lattice.ample) coords.emplace_back(c);
  return divisor(lattice, std::move(coords));
}

Rational intersect(const DivisorClass& a, const DivisorClass& b) {
  if (a.lattice == nullptr || b.lattice == nullptr) throw precondition_error("unbound divisor class");
  if (a.lattice != b.lattice) throw precondition_error("divisor classes live on different lattices");
  const auto r = a.coords.size();
  Rational total(0);
  for (std::size_t i = 0; i < r; ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (a.lattice->form[i][j] == 0) continue;
      total += a.coords[i] * Rational(a.lattice->form[i][j]) * b.coords[j];
    }
  }
  return total;
}

bool is_nef(const DivisorClass& a) {
  if (a.lattice == nullptr) throw precondition_error("unbound divisor class");
  const auto& gens = a.lattice->nef_generators;
  const auto r = static_cast<std::size_t>(a.lattice->rank);
  QMatrix g(r, QVector(gens.size(), Rational(0)));
  for (std::size_t k = 0; k < gens.size(); ++k) {
    for (std::size_t i = 0; i < r; ++i) g[i][k] = Rational(gens[k][i]);
  }
  auto sol = solve_linear(std::move(g), a.coords);
  if (!sol.consistent) return false;
  if (!sol.unique) {
    throw unsupported_cone_error(
        "nef cone generators do not determine coordinates uniquely; "
        "membership needs a dual description");
  }
  for (const auto& c : sol.solution) {
    if (c < 0) return false;
  }
  return true;
}

bool hodge_index_check(const DivisorClass& a, const DivisorClass& b) {
  if (a.lattice != b.lattice) throw precondition_error("divisor classes live on different lattices");
  if (!is_nef(a) || !is_nef(b)) throw precondition_error("hodge_index_check needs nef inputs");
  const Rational ab = intersect(a, b);
  return ab * ab >= intersect(a, a) * intersect(b, b);
}

}  // namespace surfdyn
