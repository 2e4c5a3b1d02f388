#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surfdyn/linalg.hpp"
#include "surfdyn/poly.hpp"
#include "surfdyn/surface.hpp"

namespace surfdyn {

// Variable conventions: P2 components live in Q[x, y, z] and are homogeneous
// of a common degree; P1xP1 components live in Q[t0, t1, w0, w1] with block
// split 2 and are bihomogeneous of a common bidegree per factor.
const std::vector<std::string>& p2_variables();
const std::vector<std::string>& p1xp1_variables();

// A rational self-map in normalized form: per factor the component gcd is
// constant, the coefficients are coprime integers, and the first nonzero
// component has positive leading coefficient.  Build through make_map.
struct RationalSelfMap {
  Surface surface = Surface::P2;
  std::vector<SparsePoly> components;  // P2: f0 f1 f2; P1xP1: p0 p1 q0 q1

  std::size_t factor_count() const { return surface == Surface::P2 ? 1 : 2; }
  std::size_t factor_begin(std::size_t factor) const { return 2 * factor; }
  std::size_t factor_size() const { return surface == Surface::P2 ? 3 : 2; }
};

// Validates variables and grading, then normalizes.
RationalSelfMap make_map(Surface s, std::vector<SparsePoly> components);
RationalSelfMap identity_map(Surface s);
// The monomial self-map (t, w) -> (t^d, w) of P1xP1.
RationalSelfMap power_map(std::uint32_t d);

std::uint64_t algebraic_degree(const RationalSelfMap& f);  // P2 only
std::array<std::pair<std::uint64_t, std::uint64_t>, 2> factor_bidegrees(
    const RationalSelfMap& f);  // P1xP1 only

// Action on the Neron-Severi basis.  P2: the 1x1 matrix (d).  P1xP1: columns
// are the pullbacks of e1, e2, i.e. [[a1, a2], [b1, b2]] when the factors
// have bidegrees (a1, b1) and (a2, b2).
std::vector<std::vector<Int>> pullback_matrix(const RationalSelfMap& f);

// f after g, normalized.  Throws degenerate_composition_error when a factor
// collapses to zero (g maps into the indeterminacy locus of f).
RationalSelfMap compose(const RationalSelfMap& f, const RationalSelfMap& g);

// [f^1, ..., f^n] by incremental composition (f^k = f o f^{k-1}), normalizing
// every step.  Before each step the factor degrees of the raw composite are
// predicted from the pullback matrices; if any would exceed
// max_factor_degree, budget_error carrying the last completed index is
// thrown.
std::vector<RationalSelfMap> iterate(const RationalSelfMap& f, unsigned n,
                                     std::uint64_t max_factor_degree = 4096);

// Pairwise component gcds are constant in every factor.  This is a
// sufficient criterion for a finite base locus, not a necessary one on P2.
bool base_points_finite(const RationalSelfMap& f);

// Total length of the base scheme of a P1xP1 map: 2 * (a1*b1 + a2*b2).
Int base_scheme_length_p1xp1(const RationalSelfMap& f);

// Whether the base locus is empty, decided exactly.  P2: chart-by-chart
// elimination (see chart_has_common_zero).  P1xP1: each factor's bidegree
// product a*b is zero (coprime pairs of bidegree (a,b) meet in exactly 2ab
// points counted with length, so emptiness is equivalent to ab = 0).
bool is_regular(const RationalSelfMap& f);

// Projective equality of component tuples, factor by factor, via vanishing
// of all cross products f_i g_j - f_j g_i.
bool maps_equal(const RationalSelfMap& f, const RationalSelfMap& g);

// iota(t, w) = (A(w), A^{-1}(t)) on P1xP1, where the invertible 2x2 matrix A
// acts on the w-line as a Moebius transformation ([w0:w1], w = w0/w1).
struct MoebiusInvolution {
  QMatrix a;
};

RationalSelfMap involution_map(const MoebiusInvolution& iota);
RationalSelfMap twist_by_involution(const RationalSelfMap& f,
                                    const MoebiusInvolution& iota);

// Image of a point in homogeneous coordinates, or nullopt when the point is
// indeterminate (an image factor vanishes entirely).
std::optional<std::vector<Rational>> evaluate_map(
    const RationalSelfMap& f, const std::vector<Rational>& point);

// Decides whether polynomials (already restricted to an affine chart: every
// variable other than var_x, var_y absent) share a common zero over the
// complex numbers, assuming their collective gcd is constant.  Deterministic
// shear + resultant elimination; exact.
bool chart_has_common_zero(std::vector<SparsePoly> polys, std::size_t var_x,
                           std::size_t var_y);

}  // namespace surfdyn
