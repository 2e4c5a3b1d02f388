#include "surfdyn/dynamics.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "surfdyn/errors.hpp"
#include "surfdyn/linalg.hpp"
#include "surfdyn/polygcd.hpp"
#include "surfdyn/upoly.hpp"

namespace surfdyn {

namespace {

using IMatrix = std::vector<std::vector<Int>>;

IMatrix imat_mul(const IMatrix& a, const IMatrix& b) {
  const std::size_t n = a.size();
  IMatrix r(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  }
  return r;
}

// Deterministic per-trial randomness; kept self-contained so results do not
// depend on the standard library's distribution implementations.
struct TrialRng {
  std::mt19937_64 eng;

  TrialRng(std::uint64_t seed, unsigned trial)
      : eng(seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1))) {}

  long small_int(std::uint32_t height) {
    const std::uint64_t m = 2 * static_cast<std::uint64_t>(height) + 1;
    return static_cast<long>(eng() % m) - static_cast<long>(height);
  }

  QMatrix invertible_matrix(std::size_t n, std::uint32_t height) {
    for (int tries = 0; tries < 256; ++tries) {
      QMatrix m(n, QVector(n));
      for (auto& row : m) {
        for (auto& e : row) e = Rational(small_int(height));
      }
      if (determinant(m) != 0) return m;
    }
    throw genericity_error("failed to draw an invertible shear matrix");
  }
};

UPolyZ to_uz(const SparsePoly& p, std::size_t var) {
  return primitive_z(to_upoly(p, var));
}

Int count_filtered_roots(const UPolyZ& s, const UPolyZ& filter) {
  const UPolyZ common = gcd_z(s, filter);
  return Int(s.degree() - common.degree());
}

Int p2_fiber_trial(const RationalSelfMap& f, TrialRng& rng,
                   std::uint32_t height) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const QMatrix m = rng.invertible_matrix(3, height);
    std::vector<SparsePoly> chart;
    chart.reserve(3);
    for (const auto& comp : f.components) {
      chart.push_back(specialize(linear_change(comp, m), 2, Rational(1)));
    }
    const Rational a(rng.small_int(height));
    const Rational b(rng.small_int(height));
    const SparsePoly fiber_x = chart[0] - a * chart[2];
    const SparsePoly fiber_y = chart[1] - b * chart[2];
    const SparsePoly res = poly_resultant(fiber_x, fiber_y, 1);
    if (res.is_zero()) continue;
    const UPolyZ s = squarefree_part(to_uz(res, 0));

    // x-coordinates of base points divide every nonzero pairwise resultant;
    // an identically zero one (the pair shares a factor) carries no
    // constraint and is skipped.
    UPolyZ base;
    bool have_pair = false;
    const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& [i, j] : pairs) {
      const SparsePoly rij = poly_resultant(chart[i], chart[j], 1);
      if (rij.is_zero()) continue;
      base = gcd_z(base, to_uz(rij, 0));
      have_pair = true;
    }
    if (!have_pair) {
      throw genericity_error(
          "all pairwise component resultants vanish; base points cannot be "
          "separated from the fiber");
    }
    return count_filtered_roots(s, squarefree_part(base));
  }
  throw genericity_error(
      "no usable randomization found while counting fiber points");
}

Int p1xp1_fiber_trial(const RationalSelfMap& f, TrialRng& rng,
                      std::uint32_t height) {
  const auto& vars = f.components[0].variables();
  const std::size_t split = f.components[0].block_split();
  const SparsePoly t0 = SparsePoly::variable(vars, 0, split);
  const SparsePoly t1 = SparsePoly::variable(vars, 1, split);
  const SparsePoly w0 = SparsePoly::variable(vars, 2, split);
  const SparsePoly w1 = SparsePoly::variable(vars, 3, split);

  for (int attempt = 0; attempt < 64; ++attempt) {
    const QMatrix m1 = rng.invertible_matrix(2, height);
    const QMatrix m2 = rng.invertible_matrix(2, height);
    std::vector<SparsePoly> g;
    g.reserve(4);
    for (const auto& comp : f.components) {
      g.push_back(linear_change_blocks(comp, m1, m2));
    }
    const Rational a(rng.small_int(height));
    const Rational b(rng.small_int(height));
    const SparsePoly fiber_p = g[0] - a * g[1];
    const SparsePoly fiber_q = g[2] - b * g[3];

    // Main chart t1 = w1 = 1, followed by t <- t + c*w so that distinct
    // fiber points keep distinct t-coordinates (the blockwise shears above
    // never mix the two factors, so they cannot do this).
    Rational c(0);
    while (c == 0) c = Rational(rng.small_int(height));
    const std::vector<SparsePoly> images{t0 + c * w0, t1, w0, w1};
    const auto chart_main = [&](const SparsePoly& p) {
      return substitute(specialize(specialize(p, 1, Rational(1)), 3, Rational(1)),
                        images);
    };
    const SparsePoly fp = chart_main(fiber_p);
    const SparsePoly fq = chart_main(fiber_q);
    const SparsePoly res = poly_resultant(fp, fq, 2);
    if (res.is_zero()) continue;
    const SparsePoly bp = poly_resultant(chart_main(g[0]), chart_main(g[1]), 2);
    const SparsePoly bq = poly_resultant(chart_main(g[2]), chart_main(g[3]), 2);
    if (bp.is_zero() || bq.is_zero()) continue;
    const UPolyZ s = squarefree_part(to_uz(res, 0));
    // A point of the generic fiber candidate set is spurious exactly when
    // both factors' components vanish there, i.e. at a base point of both
    // blocks at once.
    const UPolyZ base =
        squarefree_part(gcd_z(to_uz(bp, 0), to_uz(bq, 0)));
    Int count = count_filtered_roots(s, base);

    // The three strata at infinity are disjoint from the main chart and from
    // each other; with a generic shear they contribute nothing, but they are
    // swept anyway.
    const auto on_line_t = [&](const SparsePoly& p) {  // t = (1:0), var w0
      return to_uz(
          specialize(specialize(specialize(p, 0, Rational(1)), 1, Rational(0)),
                     3, Rational(1)),
          2);
    };
    const auto on_line_w = [&](const SparsePoly& p) {  // w = (1:0), var t0
      return to_uz(
          specialize(specialize(specialize(p, 2, Rational(1)), 3, Rational(0)),
                     1, Rational(1)),
          0);
    };
    bool unlucky = false;
    const auto line_count = [&](const UPolyZ& fl, const UPolyZ& gl,
                                const UPolyZ& p0l, const UPolyZ& p1l,
                                const UPolyZ& q0l, const UPolyZ& q1l) -> Int {
      if ((p0l.is_zero() && p1l.is_zero()) ||
          (q0l.is_zero() && q1l.is_zero())) {
        throw precondition_error(
            "a factor's components vanish on a whole line; fiber counting "
            "requires a finite base locus");
      }
      if (fl.is_zero() && gl.is_zero()) {
        unlucky = true;  // the random target aligned with a contracted line
        return Int(0);
      }
      const UPolyZ sl = squarefree_part(gcd_z(fl, gl));
      const UPolyZ bl =
          squarefree_part(gcd_z(gcd_z(p0l, p1l), gcd_z(q0l, q1l)));
      return count_filtered_roots(sl, bl);
    };
    count += line_count(on_line_t(fiber_p), on_line_t(fiber_q),
                        on_line_t(g[0]), on_line_t(g[1]), on_line_t(g[2]),
                        on_line_t(g[3]));
    count += line_count(on_line_w(fiber_p), on_line_w(fiber_q),
                        on_line_w(g[0]), on_line_w(g[1]), on_line_w(g[2]),
                        on_line_w(g[3]));
    if (unlucky) continue;

    const std::vector<Rational> corner{Rational(1), Rational(0), Rational(1),
                                       Rational(0)};
    const bool p_base = evaluate(g[0], corner) == 0 && evaluate(g[1], corner) == 0;
    const bool q_base = evaluate(g[2], corner) == 0 && evaluate(g[3], corner) == 0;
    if (!p_base && !q_base && evaluate(fiber_p, corner) == 0 &&
        evaluate(fiber_q, corner) == 0) {
      count += 1;
    }
    return count;
  }
  throw genericity_error(
      "no usable randomization found while counting fiber points");
}

// Smallest k/2^40 whose n-th power reaches s; an exact rational upper bound
// for s^(1/n).
Rational nth_root_upper(const Int& s, unsigned long n) {
  constexpr unsigned long kBits = 40;
  const Int target = s * pow_int(Int(2), kBits * n);
  Int k;
  mpz_root(k.get_mpz_t(), target.get_mpz_t(), n);
  if (pow_int(k, n) < target) k += 1;
  return make_rational(k, pow_int(Int(2), kBits));
}

}  // namespace

std::uint64_t default_degree_budget() { return 4096; }

DegreeSequence degree_sequence(const RationalSelfMap& f, unsigned n,
                               std::uint64_t budget) {
  if (n < 1) throw input_error("degree_sequence requires n >= 1");
  DegreeSequence seq;
  seq.surface = f.surface;
  seq.requested = n;
  std::vector<RationalSelfMap> iterates;
  try {
    iterates = iterate(f, n, budget);
  } catch (const budget_error& e) {
    seq.truncated = true;
    if (e.last_completed >= 1) {
      iterates = iterate(f, static_cast<unsigned>(e.last_completed), budget);
    }
  }
  const NSLattice& lattice = builtin_lattice(f.surface);
  for (const auto& g : iterates) {
    seq.entries.push_back(make_pullback(pullback_matrix(g), lattice));
  }
  if (!seq.entries.empty()) {
    const IMatrix& m1 = seq.entries[0].entries;
    IMatrix power = m1;
    seq.stable_up_to = 1;
    for (std::size_t k = 2; k <= seq.entries.size(); ++k) {
      power = imat_mul(power, m1);
      if (seq.entries[k - 1].entries != power) break;
      seq.stable_up_to = k;
    }
  }
  return seq;
}

std::vector<Int> sequence_intersections(const DegreeSequence& seq) {
  std::vector<Int> out;
  if (seq.entries.empty()) return out;
  const NSLattice& lattice = *seq.entries[0].lattice;
  const std::size_t r = lattice.ample.size();
  for (const auto& m : seq.entries) {
    std::vector<Int> pull(r, Int(0));  // (f^n)^* H
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        pull[i] += m.entries[i][j] * lattice.ample[j];
      }
    }
    Int s(0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        s += lattice.ample[i] * lattice.form[i][j] * pull[j];
      }
    }
    out.push_back(s);
  }
  return out;
}

DynamicalDegree dynamical_degree(const RationalSelfMap& f,
                                 const DegreeSequence& seq,
                                 const Rational& tolerance,
                                 const std::optional<Int>& deg_top_hint) {
  if (seq.entries.empty()) {
    throw precondition_error("dynamical_degree needs a nonempty degree sequence");
  }
  DynamicalDegree dd;
  const std::vector<Int> s = sequence_intersections(seq);
  const std::size_t count = s.size();

  // argmin of s_n^(1/n) by exact cross-power comparison.
  std::size_t best = 1;
  for (std::size_t k = 2; k <= count; ++k) {
    if (pow_int(s[k - 1], best) < pow_int(s[best - 1], k)) best = k;
  }
  dd.fekete_n = best;
  dd.fekete_upper =
      nth_root_decimal_string(Rational(s[best - 1]), best, Round::Up);
  dd.point_estimate =
      nth_root_decimal_string(Rational(s[count - 1]), count, Round::Nearest);

  const SpectralResult spectrum = spectral_radius(seq.entries[0], tolerance);
  const Rational rho =
      spectrum.rho_exact ? *spectrum.rho_exact : spectrum.rho_lo;
  if (rho > 0) {
    Rational cmax(0);
    for (std::size_t k = 1; k <= count; ++k) {
      const Rational ratio = Rational(s[k - 1]) / pow_rational(rho, k);
      if (ratio > cmax) cmax = ratio;
    }
    dd.empirical_c = cmax;
  }

  const bool fully_stable = !seq.truncated &&
                            seq.entries.size() == seq.requested &&
                            seq.stable_up_to == seq.entries.size() &&
                            seq.requested >= 2;
  const auto [rank, trace] = rank_and_trace(seq.entries[0]);
  if (fully_stable) {
    dd.method = "spectral-stable";
    dd.lambda_exact = spectrum.rho_exact;
    dd.lo = spectrum.rho_lo;
    dd.hi = spectrum.rho_hi;
    return dd;
  }
  if (rank == 1 && trace >= 1 && deg_top_hint.value_or(Int(1)) >= 1) {
    dd.method = "rank-one-trace";
    dd.lambda_exact = Rational(trace);
    dd.lo = Rational(trace);
    dd.hi = Rational(trace);
    return dd;
  }
  dd.method = "sequence-only";
  dd.lo = Rational(1);
  dd.hi = nth_root_upper(s[best - 1], best);
  return dd;
}

Int topological_degree(const RationalSelfMap& f, const FiberCountConfig& cfg) {
  if (cfg.trials < 3) throw input_error("fiber counting requires trials >= 3");
  if (cfg.height < 1) throw input_error("fiber counting requires height >= 1");
  std::optional<Int> agreed;
  for (unsigned t = 0; t < cfg.trials; ++t) {
    TrialRng rng(cfg.seed, t);
    const Int c = f.surface == Surface::P2
                      ? p2_fiber_trial(f, rng, cfg.height)
                      : p1xp1_fiber_trial(f, rng, cfg.height);
    if (!agreed) {
      agreed = c;
    } else if (*agreed != c) {
      throw genericity_error("fiber-count trials disagree (" +
                             to_string(*agreed) + " vs " + to_string(c) +
                             "); rerun with a different seed");
    }
  }
  if (*agreed < 1) {
    throw genericity_error(
        "generic fiber came back empty; the map may not be dominant");
  }
  return *agreed;
}

std::string comparison_name(Comparison c) {
  switch (c) {
    case Comparison::Less: return "less";
    case Comparison::Equal: return "equal";
    case Comparison::Greater: return "greater";
    default: return "indeterminate";
  }
}

Comparison log_concavity_check(const DynamicalDegree& lambda,
                               const Int& deg_top) {
  const Rational d(deg_top);
  if (lambda.lambda_exact) {
    const Rational sq = *lambda.lambda_exact * *lambda.lambda_exact;
    if (sq < d) return Comparison::Less;
    if (sq == d) return Comparison::Equal;
    return Comparison::Greater;
  }
  if (lambda.lo * lambda.lo > d) return Comparison::Greater;
  if (lambda.hi * lambda.hi < d) return Comparison::Less;
  return Comparison::Indeterminate;
}

RegularityReport regularity_report(const RationalSelfMap& f,
                                   const DynamicalDegree& lambda,
                                   const Int& deg_top) {
  RegularityReport report;
  report.is_regular_geometric = is_regular(f);
  const Comparison c = log_concavity_check(lambda, deg_top);
  report.numeric_indeterminate = (c == Comparison::Indeterminate);
  report.lambda_sq_equals_deg = (c == Comparison::Equal);
  report.consistent =
      !report.numeric_indeterminate &&
      report.is_regular_geometric == report.lambda_sq_equals_deg;
  return report;
}

std::string entropy_bound(const DynamicalDegree& lambda, const Int& deg_top) {
  if (deg_top < 1) {
    throw precondition_error("entropy bound requires deg_top >= 1");
  }
  const Rational d(deg_top);
  if (lambda.lambda_exact) {
    return log_decimal_string(std::max(*lambda.lambda_exact, d),
                              Round::Nearest);
  }
  return log_decimal_string(std::max(lambda.hi, d), Round::Up);
}

RankOneReport rank_one_report(const RationalSelfMap& f,
                              const DynamicalDegree& lambda) {
  RankOneReport report;
  const PullbackMatrix m =
      make_pullback(pullback_matrix(f), builtin_lattice(f.surface));
  const auto [rank, trace] = rank_and_trace(m);
  report.is_rank_one = (rank == 1);
  report.trace = trace;
  if (report.is_rank_one && lambda.lambda_exact) {
    report.trace_identity = (*lambda.lambda_exact == Rational(trace));
  }
  return report;
}

FamilyTable family_scan(
    const std::vector<Rational>& values,
    const std::function<std::vector<SparsePoly>(const Rational&)>&
        raw_components,
    bool with_deg_top, const FiberCountConfig& cfg) {
  if (values.empty()) throw input_error("family scan needs at least one value");
  FamilyTable table;
  std::optional<Int> first_length;
  std::optional<std::vector<std::vector<Int>>> first_matrix;
  bool any_clean = false;
  bool lengths_match = true;
  bool matrices_match = true;
  for (const auto& value : values) {
    FamilyRow row;
    row.value = value;
    std::vector<SparsePoly> raw = raw_components(value);
    if (raw.size() != 4) {
      throw input_error("family scan expects four P1xP1 components");
    }
    for (std::size_t block = 0; block < 4; block += 2) {
      const std::string tag = block == 0 ? "first" : "second";
      if (raw[block].is_zero() && raw[block + 1].is_zero()) {
        row.degenerate = true;
        row.note += (row.note.empty() ? "" : "; ") + tag +
                    " factor vanishes identically";
        continue;
      }
      const SparsePoly g = poly_gcd(raw[block], raw[block + 1]);
      if (!g.is_constant()) {
        row.degenerate = true;
        row.note += (row.note.empty() ? "" : "; ") + tag +
                    " factor has common divisor " + render(g);
      }
    }
    try {
      const RationalSelfMap fm = make_map(Surface::P1xP1, raw);
      row.analyzed = true;
      row.base_length = base_scheme_length_p1xp1(fm);
      row.matrix = pullback_matrix(fm);
      if (with_deg_top) row.deg_top = topological_degree(fm, cfg);
    } catch (const error& e) {
      row.note += (row.note.empty() ? "" : "; ") + std::string(e.what());
    }
    if (!row.degenerate && row.analyzed) {
      if (!first_length) {
        first_length = row.base_length;
        first_matrix = row.matrix;
        any_clean = true;
      } else {
        lengths_match = lengths_match && row.base_length == *first_length;
        matrices_match = matrices_match && row.matrix == *first_matrix;
      }
    }
    table.rows.push_back(std::move(row));
  }
  table.length_constant = any_clean && lengths_match;
  table.matrix_constant = any_clean && matrices_match;
  return table;
}

std::vector<InvolutionRow> involution_invariance_scan(
    const RationalSelfMap& f, InvolutionFamily family,
    const std::vector<Rational>& values, const std::optional<Rational>& eps,
    bool include_identity) {
  if (f.surface != Surface::P1xP1) {
    throw precondition_error("involution scans are defined on P1xP1");
  }
  std::vector<InvolutionRow> rows;
  for (const auto& v : values) {
    InvolutionRow row;
    row.value = v;
    const bool reciprocal = family == InvolutionFamily::Reciprocal;
    row.candidate = reciprocal ? "A(w) = (" + to_string(v) + ")/w"
                               : "A(w) = (" + to_string(v) + ")*w";
    if (v == 0) {
      row.skipped = true;
      row.note = "singular candidate (zero coefficient)";
      rows.push_back(std::move(row));
      continue;
    }
    if (!reciprocal && eps) {
      row.note = (v * v + *eps == 0) ? "L^2 = -eps holds exactly"
                                     : "L^2 + eps != 0 (family constraint "
                                       "has no rational solution here)";
    }
    QMatrix a;
    if (reciprocal) {
      a = {{Rational(0), v}, {Rational(1), Rational(0)}};
    } else {
      a = {{v, Rational(0)}, {Rational(0), Rational(1)}};
    }
    const MoebiusInvolution iota{a};
    row.invariant = maps_equal(twist_by_involution(f, iota), f);
    rows.push_back(std::move(row));
  }
  if (include_identity) {
    InvolutionRow row;
    row.candidate = "A = identity (block swap)";
    row.value = Rational(1);
    const MoebiusInvolution iota{identity_matrix(2)};
    row.invariant = maps_equal(twist_by_involution(f, iota), f);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace surfdyn
