#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <optional>
#include <vector>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/testutil.hpp"
#include "surfdyn/dynamics.hpp"
#include "surfdyn/polygcd.hpp"

using namespace surfdyn;
using fixtures::ex41;
using fixtures::ex42;
using fixtures::ex44;
using fixtures::feps;
using fixtures::q_poly;

namespace {

std::vector<Int> p2_degrees(const DegreeSequence& seq) {
  std::vector<Int> out;
  for (const auto& m : seq.entries) out.push_back(m.entries[0][0]);
  return out;
}

std::vector<SparsePoly> raw_feps(const Rational& e) {
  return {q_poly({{{1, 1, 1, 1}, 1}}),
          q_poly({{{2, 0, 0, 2}, 1}, {{0, 2, 2, 0}, -e}}),
          q_poly({{{2, 0, 1, 1}, 1}, {{1, 1, 0, 2}, -e}}),
          q_poly({{{2, 0, 0, 2}, 1},
                  {{2, 0, 2, 0}, -1},
                  {{1, 1, 1, 1}, 2},
                  {{0, 2, 0, 2}, -1}})};
}

// Projective agreement of two maps at `points` random defined points.
bool evaluation_oracle_equal(const RationalSelfMap& a, const RationalSelfMap& b,
                             testutil::Rng& rng, int points = 5) {
  int done = 0;
  while (done < points) {
    std::vector<Rational> pt;
    for (int i = 0; i < 4; ++i) pt.push_back(Rational(rng.uniform(-9, 9)));
    if ((pt[0] == 0 && pt[1] == 0) || (pt[2] == 0 && pt[3] == 0)) continue;
    const auto ia = evaluate_map(a, pt);
    const auto ib = evaluate_map(b, pt);
    if (!ia || !ib) continue;
    if (!fixtures::proj_equal(Surface::P1xP1, *ia, *ib)) return false;
    ++done;
  }
  return true;
}

}  // namespace

TEST_CASE("degree sequences of the gallery maps") {
  const auto s41 = degree_sequence(ex41(), 5);
  CHECK(s41.surface == Surface::P2);
  CHECK(p2_degrees(s41) == std::vector<Int>{2, 4, 8, 16, 32});
  CHECK(s41.stable_up_to == 5);
  CHECK_FALSE(s41.truncated);
  CHECK(s41.requested == 5);

  const auto s42 = degree_sequence(ex42(), 4);
  CHECK(p2_degrees(s42) == std::vector<Int>{3, 8, 21, 55});
  CHECK(s42.stable_up_to == 1);  // 8 < 3^2: the very first composite drops
  CHECK_FALSE(s42.truncated);

  const auto s44 = degree_sequence(ex44(), 3);
  CHECK(s44.entries[0].entries ==
        std::vector<std::vector<Int>>{{2, 2}, {2, 2}});
  CHECK(s44.entries[1].entries ==
        std::vector<std::vector<Int>>{{6, 8}, {6, 8}});
  CHECK(s44.stable_up_to == 1);
  CHECK(sequence_intersections(s44) == std::vector<Int>{8, 28, 100});

  const auto spow = degree_sequence(power_map(2), 4);
  CHECK(spow.stable_up_to == 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    const Int d = pow_int(Int(2), n);
    CHECK(spow.entries[n - 1].entries ==
          std::vector<std::vector<Int>>{{d, 0}, {0, 1}});
  }

  const auto sid = degree_sequence(identity_map(Surface::P2), 3);
  CHECK(p2_degrees(sid) == std::vector<Int>{1, 1, 1});
  CHECK(sid.stable_up_to == 3);
}

TEST_CASE("degree sequence budgets and edge cases") {
  CHECK_THROWS_AS(degree_sequence(ex41(), 0), input_error);

  // A tight per-factor degree cap stops the iteration but keeps the prefix.
  const auto cut = degree_sequence(ex44(), 4, 50);
  CHECK(cut.truncated);
  CHECK(cut.requested == 4);
  CHECK(cut.entries.size() == 2);
  CHECK(sequence_intersections(cut) == std::vector<Int>{8, 28});

  // The map itself always survives; the cap applies to later iterates.
  const auto none = degree_sequence(ex42(), 3, 2);
  CHECK(none.truncated);
  CHECK(none.entries.size() == 1);
}

TEST_CASE("gallery intersection numbers are submultiplicative") {
  for (const auto& f : {ex41(), ex42()}) {
    const auto s = sequence_intersections(degree_sequence(f, 4));
    for (std::size_t n = 1; n < 4; ++n) {
      for (std::size_t m = 1; n + m <= 4; ++m) {
        CHECK(s[n + m - 1] <= s[n - 1] * s[m - 1]);
      }
    }
  }
  // For the stable entries the root sequence is non-increasing:
  // s_n^(1/n) >= s_{n+1}^(1/(n+1))  <=>  s_n^(n+1) >= s_{n+1}^n.
  for (const auto& f : {ex41(), power_map(3)}) {
    const auto s = sequence_intersections(degree_sequence(f, 4));
    for (std::size_t n = 1; n + 1 <= s.size(); ++n) {
      CHECK(pow_int(s[n - 1], n + 1) >= pow_int(s[n], n));
    }
  }
}

TEST_CASE("dynamical degree certificates on the gallery") {
  const auto f41 = ex41();
  const auto d41 = dynamical_degree(f41, degree_sequence(f41, 5));
  CHECK(d41.method == "spectral-stable");
  REQUIRE(d41.lambda_exact.has_value());
  CHECK(*d41.lambda_exact == 2);
  CHECK(d41.lo == 2);
  CHECK(d41.hi == 2);
  CHECK(d41.fekete_upper == "2");
  REQUIRE(d41.empirical_c.has_value());
  CHECK(*d41.empirical_c == 1);  // s_n is exactly 2^n

  const auto f42 = ex42();
  const auto d42 =
      dynamical_degree(f42, degree_sequence(f42, 4), default_tolerance(),
                       std::optional<Int>(Int(4)));
  CHECK(d42.method == "rank-one-trace");
  REQUIRE(d42.lambda_exact.has_value());
  CHECK(*d42.lambda_exact == 3);
  CHECK(d42.lo == 3);
  CHECK(d42.hi == 3);
  // The sequence data stays visible next to the trace certificate: the
  // fourth root of s_4 = 55 is the smallest computed upper bound for the
  // root sequence's limit.
  CHECK(d42.fekete_n == 4);
  CHECK(d42.fekete_upper == "2.72326981533151");   // 55^(1/4), rounded up
  CHECK(d42.point_estimate == "2.7232698153315");  // nearest

  const auto f44 = ex44();
  const auto d44 =
      dynamical_degree(f44, degree_sequence(f44, 3), default_tolerance(),
                       std::optional<Int>(Int(8)));
  CHECK(d44.method == "rank-one-trace");
  REQUIRE(d44.lambda_exact.has_value());
  CHECK(*d44.lambda_exact == 4);

  for (const std::uint32_t d : {2u, 3u, 5u}) {
    const auto pm = power_map(d);
    const auto dp = dynamical_degree(pm, degree_sequence(pm, 4));
    CHECK(dp.method == "spectral-stable");
    REQUIRE(dp.lambda_exact.has_value());
    CHECK(*dp.lambda_exact == d);
  }
}

TEST_CASE("sequence-only certificates keep the bracket sound") {
  // Blocking the dominance hint forces the uncertified route.
  const auto f = ex42();
  const auto seq = degree_sequence(f, 4);
  const auto dd =
      dynamical_degree(f, seq, default_tolerance(), std::optional<Int>(Int(0)));
  CHECK(dd.method == "sequence-only");
  CHECK_FALSE(dd.lambda_exact.has_value());
  CHECK(dd.lo == 1);
  // hi is an exact rational with hi^4 >= s_4 = 55, near 55^(1/4).
  CHECK(pow_rational(dd.hi, 4) >= 55);
  CHECK(dd.hi < Rational(28, 10));
  CHECK(dd.fekete_n == 4);

  DegreeSequence empty;
  empty.surface = Surface::P2;
  empty.requested = 3;
  empty.truncated = true;
  CHECK_THROWS_AS(dynamical_degree(f, empty), precondition_error);
}

TEST_CASE("topological degrees of the gallery maps") {
  CHECK(topological_degree(ex41()) == 3);
  CHECK(topological_degree(ex42()) == 4);
  CHECK(topological_degree(ex44()) == 8);
  for (const std::uint32_t d : {2u, 3u, 5u}) {
    CHECK(topological_degree(power_map(d)) == d);
  }
  CHECK(topological_degree(identity_map(Surface::P2)) == 1);
  CHECK(topological_degree(identity_map(Surface::P1xP1)) == 1);
}

TEST_CASE("fiber counting is seed-invariant and validates its config") {
  for (const std::uint64_t seed : {1ull, 7ull, 12345ull}) {
    FiberCountConfig cfg;
    cfg.seed = seed;
    CHECK(topological_degree(ex41(), cfg) == 3);
    CHECK(topological_degree(ex44(), cfg) == 8);
  }
  FiberCountConfig more;
  more.trials = 5;
  CHECK(topological_degree(ex42(), more) == 4);

  FiberCountConfig bad;
  bad.trials = 2;
  CHECK_THROWS_AS(topological_degree(ex41(), bad), input_error);
  FiberCountConfig flat;
  flat.height = 0;
  CHECK_THROWS_AS(topological_degree(ex41(), flat), input_error);
}

TEST_CASE("tiny randomization height makes the trials disagree") {
  FiberCountConfig cfg;
  cfg.height = 1;
  cfg.trials = 6;
  CHECK_THROWS_AS(topological_degree(ex41(), cfg), genericity_error);
}

TEST_CASE("topological degree is multiplicative for the quadratic example") {
  const auto f = ex41();
  const auto ff = compose(f, f);
  CHECK(algebraic_degree(ff) == 4);
  CHECK(topological_degree(ff) == 9);
}

TEST_CASE("projection formula for the power family") {
  for (const std::uint32_t d : {2u, 3u, 5u}) {
    const auto pm = power_map(d);
    const Int deg = topological_degree(pm);
    CHECK(deg == d);
    const auto& lattice = p1xp1_lattice();
    const auto m = pullback_matrix(pm);
    QVector pulled(2, Rational(0));
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        pulled[i] += Rational(m[i][j]) * Rational(lattice.ample[j]);
      }
    }
    const auto fh = divisor(lattice, pulled);
    const auto h = ample_class(lattice);
    CHECK(intersect(fh, fh) == Rational(deg) * intersect(h, h));  // 2d = d*2
  }
}

TEST_CASE("squared dynamical degree against topological degree") {
  struct Row {
    RationalSelfMap f;
    unsigned n;
    Comparison expected;
  };
  const std::vector<Row> rows = {{ex41(), 5, Comparison::Greater},
                                 {ex42(), 4, Comparison::Greater},
                                 {ex44(), 3, Comparison::Greater},
                                 {power_map(2), 4, Comparison::Greater},
                                 {identity_map(Surface::P1xP1), 3,
                                  Comparison::Equal}};
  for (const auto& row : rows) {
    const Int deg = topological_degree(row.f);
    const auto dd = dynamical_degree(row.f, degree_sequence(row.f, row.n),
                                     default_tolerance(), deg);
    const auto cmp = log_concavity_check(dd, deg);
    CHECK(cmp == row.expected);
    CHECK(cmp != Comparison::Less);
  }
  CHECK(comparison_name(Comparison::Greater) == "greater");
  CHECK(comparison_name(Comparison::Indeterminate) == "indeterminate");
}

TEST_CASE("regularity reports") {
  const auto report = [](const RationalSelfMap& f, unsigned n) {
    const Int deg = topological_degree(f);
    const auto dd =
        dynamical_degree(f, degree_sequence(f, n), default_tolerance(), deg);
    return regularity_report(f, dd, deg);
  };

  const auto r41 = report(ex41(), 5);
  CHECK_FALSE(r41.is_regular_geometric);
  CHECK_FALSE(r41.lambda_sq_equals_deg);
  CHECK(r41.consistent);

  const auto r42 = report(ex42(), 4);
  CHECK_FALSE(r42.is_regular_geometric);
  CHECK_FALSE(r42.lambda_sq_equals_deg);
  CHECK(r42.consistent);

  const auto r44 = report(ex44(), 3);
  CHECK_FALSE(r44.is_regular_geometric);
  CHECK(r44.consistent);

  // The anomaly fixture: geometrically regular, yet lambda^2 = 4 != 2.
  const auto rp = report(power_map(2), 4);
  CHECK(rp.is_regular_geometric);
  CHECK_FALSE(rp.lambda_sq_equals_deg);
  CHECK_FALSE(rp.consistent);
  CHECK_FALSE(rp.numeric_indeterminate);
}

TEST_CASE("entropy bounds print natural logs to fifteen digits") {
  const auto bound = [](const RationalSelfMap& f, unsigned n) {
    const Int deg = topological_degree(f);
    const auto dd =
        dynamical_degree(f, degree_sequence(f, n), default_tolerance(), deg);
    return entropy_bound(dd, deg);
  };
  CHECK(bound(ex41(), 5) == "1.09861228866811");   // log 3
  CHECK(bound(ex42(), 4) == "1.38629436111989");   // log 4
  CHECK(bound(ex44(), 3) == "2.07944154167984");   // log 8
  CHECK(bound(power_map(2), 4) == "0.693147180559945");  // log 2
}

TEST_CASE("rank-one reports and the trace identity") {
  const auto report = [](const RationalSelfMap& f, unsigned n,
                         std::optional<Int> hint) {
    const auto dd = dynamical_degree(f, degree_sequence(f, n),
                                     default_tolerance(), hint);
    return rank_one_report(f, dd);
  };

  const auto r41 = report(ex41(), 5, std::nullopt);
  CHECK(r41.is_rank_one);  // on a rank-1 lattice every pullback is rank one
  CHECK(r41.trace == 2);
  REQUIRE(r41.trace_identity.has_value());
  CHECK(*r41.trace_identity);

  const auto r42 = report(ex42(), 4, Int(4));
  CHECK(r42.is_rank_one);
  CHECK(r42.trace == 3);
  CHECK(r42.trace_identity.value());

  const auto r44 = report(ex44(), 3, Int(8));
  CHECK(r44.is_rank_one);
  CHECK(r44.trace == 4);  // 2 + 2
  CHECK(r44.trace_identity.value());

  const auto rp = report(power_map(2), 4, std::nullopt);
  CHECK_FALSE(rp.is_rank_one);  // diag(2, 1) has rank two
  CHECK_FALSE(rp.trace_identity.has_value());
}

TEST_CASE("family scan over the one-parameter gallery family") {
  const std::vector<Rational> values{Rational(1), Rational(2), Rational(3),
                                     Rational(1) / 2, Rational(0)};
  const auto table = family_scan(values, raw_feps);
  REQUIRE(table.rows.size() == 5);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = table.rows[i];
    CHECK_FALSE(row.degenerate);
    CHECK(row.analyzed);
    CHECK(row.base_length == 16);
    CHECK(row.matrix == std::vector<std::vector<Int>>{{2, 2}, {2, 2}});
  }
  const auto& zero = table.rows[4];
  CHECK(zero.degenerate);
  CHECK(zero.note.find("t0*w1") != std::string::npos);
  CHECK(zero.analyzed);
  CHECK(zero.base_length == 10);  // bidegrees drop to (1,1) x (2,2)
  CHECK(zero.matrix == std::vector<std::vector<Int>>{{1, 2}, {1, 2}});
  CHECK(table.length_constant);
  CHECK(table.matrix_constant);

  // Optional fiber counts on a short scan.
  const auto with_deg =
      family_scan({Rational(1), Rational(2)}, raw_feps, true);
  for (const auto& row : with_deg.rows) {
    REQUIRE(row.deg_top.has_value());
    CHECK(*row.deg_top == 8);
  }

  // A single-value scan agrees with the individual operations.
  const auto single = family_scan({Rational(1)}, raw_feps);
  CHECK(single.rows[0].base_length == base_scheme_length_p1xp1(ex44()));
  CHECK(single.rows[0].matrix == pullback_matrix(ex44()));

  CHECK_THROWS_AS(family_scan({}, raw_feps), input_error);
}

TEST_CASE("involution scans: reciprocal and scaling candidates") {
  testutil::Rng rng(2024);

  // No reciprocal candidate fixes the scanned family member at eps = 2.
  const auto rows2 = involution_invariance_scan(
      feps(2), InvolutionFamily::Reciprocal,
      {Rational(1), Rational(2), Rational(-1), Rational(1) / 2, Rational(0)},
      Rational(2));
  REQUIRE(rows2.size() == 6);  // five candidates plus the block swap
  for (const auto& row : rows2) {
    if (row.skipped) {
      CHECK(row.value == 0);
      CHECK(row.note.find("singular") != std::string::npos);
      continue;
    }
    CHECK_FALSE(row.invariant);
  }

  // Positive control at eps = 1: A(w) = -1/w genuinely fixes the map.
  const auto rows1 = involution_invariance_scan(
      feps(1), InvolutionFamily::Reciprocal,
      {Rational(-1), Rational(1), Rational(2), Rational(1) / 2}, Rational(1),
      false);
  CHECK(rows1[0].invariant);
  CHECK_FALSE(rows1[1].invariant);
  CHECK_FALSE(rows1[2].invariant);
  CHECK_FALSE(rows1[3].invariant);

  // Scaling candidates at the exact-match locus L^2 = -eps.
  const auto scale1 = involution_invariance_scan(
      feps(-1), InvolutionFamily::Scaling, {Rational(1)}, Rational(-1), false);
  CHECK_FALSE(scale1[0].invariant);
  CHECK(scale1[0].note == "L^2 = -eps holds exactly");
  const auto scale2 = involution_invariance_scan(
      feps(-4), InvolutionFamily::Scaling, {Rational(2)}, Rational(-4), false);
  CHECK_FALSE(scale2[0].invariant);
  const auto off = involution_invariance_scan(
      feps(2), InvolutionFamily::Scaling, {Rational(1)}, Rational(2), false);
  CHECK(off[0].note.find("L^2 + eps != 0") != std::string::npos);

  // The block swap never fixes the asymmetric power map.
  const auto swap_rows = involution_invariance_scan(
      power_map(3), InvolutionFamily::Reciprocal, {});
  REQUIRE(swap_rows.size() == 1);
  CHECK_FALSE(swap_rows[0].invariant);

  // Every tested row agrees with the random-point evaluation oracle.
  for (const auto* batch : {&rows2, &rows1}) {
    const RationalSelfMap f = batch == &rows2 ? feps(2) : feps(1);
    for (const auto& row : *batch) {
      if (row.skipped) continue;
      MoebiusInvolution iota;
      if (row.candidate.find("identity") != std::string::npos) {
        iota.a = identity_matrix(2);
      } else {
        iota.a = QMatrix{{Rational(0), row.value},
                         {Rational(1), Rational(0)}};
      }
      CHECK(evaluation_oracle_equal(twist_by_involution(f, iota), f, rng) ==
            row.invariant);
    }
  }
}

TEST_CASE("random maps: submultiplicativity and the degree inequality") {
  testutil::Rng rng(424242);
  int analyzed = 0;
  for (int i = 0; i < 160; ++i) {
    RationalSelfMap f = (i % 2 == 0)
                            ? fixtures::random_p2_map(rng, 2)
                            : fixtures::random_p1xp1_map(rng, 1, 1, 1, 1);
    try {
      const auto seq = degree_sequence(f, 3, 64);
      const auto s = sequence_intersections(seq);
      for (std::size_t n = 1; n < s.size(); ++n) {
        for (std::size_t m = 1; n + m <= s.size(); ++m) {
          CHECK(s[n + m - 1] <= s[n - 1] * s[m - 1]);
        }
      }
      if (s.empty()) continue;
      const Int deg = topological_degree(f);
      const auto dd =
          dynamical_degree(f, seq, default_tolerance(), deg);
      CHECK(log_concavity_check(dd, deg) != Comparison::Less);
      ++analyzed;
    } catch (const genericity_error&) {
    } catch (const precondition_error&) {
    } catch (const degenerate_composition_error&) {
    }
  }
  CHECK(analyzed >= 100);
}
