#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "surfdyn/linalg.hpp"
#include "surfdyn/rational.hpp"

namespace surfdyn {

enum class Surface { P2, P1xP1 };

std::string surface_name(Surface s);
Surface surface_from_name(const std::string& name);

// Neron-Severi lattice: intersection form, a generating set for the nef cone,
// and an ample reference class in the cone interior.
struct NSLattice {
  int rank = 0;
  std::vector<std::vector<Int>> form;            // symmetric rank x rank
  std::vector<std::vector<Int>> nef_generators;  // rows of length rank
  std::vector<Int> ample;
};

// Built-in lattices. P2: rank 1, form (1), H = (1). P1xP1: rank 2 in the basis
// e1 = {t = const}, e2 = {w = const}, form [[0,1],[1,0]], H = (1,1); a curve of
// bidegree (a,b) has class a*e1 + b*e2.
const NSLattice& p2_lattice();
const NSLattice& p1xp1_lattice();
const NSLattice& builtin_lattice(Surface s);

// Abstract lattice from {"rank": r, "form": [[..]], "nef_generators": [[..]..],
// "ample": [..]}. Throws input_error on malformed data.
NSLattice lattice_from_json(const nlohmann::json& j);

struct DivisorClass {
  const NSLattice* lattice = nullptr;
  QVector coords;
};

DivisorClass divisor(const NSLattice& lattice, QVector coords);
DivisorClass ample_class(const NSLattice& lattice);

// Exact intersection pairing a^T * form * b.
Rational intersect(const DivisorClass& a, const DivisorClass& b);

// Membership in the cone spanned by nef_generators, decided by exact linear
// solve. Cones whose generators do not determine the coefficients uniquely
// (e.g. more generators than the rank) raise unsupported_cone_error.
bool is_nef(const DivisorClass& a);

// (a.b)^2 >= (a^2)(b^2) for nef classes a, b; both inputs must be nef.
bool hodge_index_check(const DivisorClass& a, const DivisorClass& b);

}  // namespace surfdyn
