#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "surfdyn/ratmap.hpp"
#include "surfdyn/spectral.hpp"

namespace surfdyn {

std::uint64_t default_degree_budget();  // per-factor degree cap for iterates

// Exact degree data of the normalized iterates f^1..f^N.  entries[k] is the
// pullback matrix of f^{k+1}; stable_up_to is the largest n such that
// entry(k) equals entry(1)^k for every k <= n (always >= 1 when nonempty).
struct DegreeSequence {
  Surface surface = Surface::P2;
  std::vector<PullbackMatrix> entries;
  std::size_t stable_up_to = 0;
  bool truncated = false;  // budget stopped iteration before `requested`
  unsigned requested = 0;
};

DegreeSequence degree_sequence(const RationalSelfMap& f, unsigned n,
                               std::uint64_t budget = default_degree_budget());

// s_n = (H . (f^n)^* H) against the built-in ample class; one value per
// computed entry.
std::vector<Int> sequence_intersections(const DegreeSequence& seq);

// How lambda was certified:
//   spectral-stable  the full requested sequence is stable, so lambda is the
//                    spectral radius of the pullback matrix;
//   rank-one-trace   the pullback matrix has rank 1 and the map is treated as
//                    dominant, so lambda equals the trace;
//   sequence-only    no certificate beyond submultiplicativity: the bracket
//                    top is min_n s_n^{1/n} (Fekete), the bottom is 1.
struct DynamicalDegree {
  std::optional<Rational> lambda_exact;
  Rational lo{0}, hi{0};  // certified bracket containing lambda
  std::string method;
  // Sequence-derived data, filled for every method:
  std::size_t fekete_n = 0;     // argmin over computed n of s_n^{1/n}
  std::string fekete_upper;     // min_n s_n^{1/n}, decimal rounded up
  std::string point_estimate;   // s_N^{1/N} for the last computed N
  std::optional<Rational> empirical_c;  // max_n s_n / rho^n when rho is known
};

// deg_top_hint, when present, certifies dominance (>= 1) or blocks the
// rank-one trace route (<= 0); absent means "assume dominant".
DynamicalDegree dynamical_degree(
    const RationalSelfMap& f, const DegreeSequence& seq,
    const Rational& tolerance = default_tolerance(),
    const std::optional<Int>& deg_top_hint = std::nullopt);

struct FiberCountConfig {
  unsigned trials = 3;       // >= 3
  std::uint64_t seed = 0;
  std::uint32_t height = 100;  // max |coefficient| of random shears/targets
};

// Number of preimages of a generic point, by resultant elimination over
// randomized shears and targets; all trials must agree.
Int topological_degree(const RationalSelfMap& f,
                       const FiberCountConfig& cfg = FiberCountConfig{});

enum class Comparison { Less, Equal, Greater, Indeterminate };
std::string comparison_name(Comparison c);

// lambda^2 vs deg_top, exact when lambda is; with an interval only, decided
// from the bracket bounds and Indeterminate when they straddle.  Less signals
// an anomaly (a surjective map always satisfies lambda^2 >= deg_top).
Comparison log_concavity_check(const DynamicalDegree& lambda,
                               const Int& deg_top);

struct RegularityReport {
  bool is_regular_geometric = false;      // base locus empty, decided exactly
  bool lambda_sq_equals_deg = false;      // numeric side
  bool numeric_indeterminate = false;
  bool consistent = false;  // geometric <=> numeric (false when indeterminate)
};

RegularityReport regularity_report(const RationalSelfMap& f,
                                   const DynamicalDegree& lambda,
                                   const Int& deg_top);

// Decimal string (15 significant digits) of max(log lambda, log deg_top).
// Rendered to nearest from exact inputs; from the bracket top, rounded up,
// when lambda is known only by an interval.
std::string entropy_bound(const DynamicalDegree& lambda, const Int& deg_top);

struct RankOneReport {
  bool is_rank_one = false;
  Int trace{0};
  std::optional<bool> trace_identity;  // nullopt: rank != 1 or lambda inexact
};

RankOneReport rank_one_report(const RationalSelfMap& f,
                              const DynamicalDegree& lambda);

struct FamilyRow {
  Rational value{0};
  bool degenerate = false;  // a factor acquired a nonconstant common divisor
  std::string note;
  bool analyzed = false;    // normalized data below is populated
  Int base_length{0};
  std::vector<std::vector<Int>> matrix;
  std::optional<Int> deg_top;
};

struct FamilyTable {
  std::vector<FamilyRow> rows;
  // Constancy across the non-degenerate rows:
  bool length_constant = false;
  bool matrix_constant = false;
};

// Scans a one-parameter family of P1xP1 maps.  raw_components(value) must
// yield the four components BEFORE normalization so that degeneration (a
// factor's gcd becoming nonconstant) is observable.
FamilyTable family_scan(
    const std::vector<Rational>& values,
    const std::function<std::vector<SparsePoly>(const Rational&)>&
        raw_components,
    bool with_deg_top = false,
    const FiberCountConfig& cfg = FiberCountConfig{});

enum class InvolutionFamily { Reciprocal, Scaling };

struct InvolutionRow {
  std::string candidate;
  Rational value{0};
  bool skipped = false;  // singular candidate, not tested
  std::string note;
  bool invariant = false;  // maps_equal(f o iota, f)
};

// Tests f o iota = f for iota(t, w) = (A(w), A^{-1}(t)) over a list of
// candidate Moebius maps: A(w) = K/w (Reciprocal) or A(w) = L*w (Scaling).
// K = 0 / L = 0 are singular and skipped with a note.  When eps is given,
// scaling rows note whether L^2 + eps = 0 holds exactly.  include_identity
// appends the A = identity candidate (the block swap (t, w) -> (w, t)).
std::vector<InvolutionRow> involution_invariance_scan(
    const RationalSelfMap& f, InvolutionFamily family,
    const std::vector<Rational>& values,
    const std::optional<Rational>& eps = std::nullopt,
    bool include_identity = true);

}  // namespace surfdyn
