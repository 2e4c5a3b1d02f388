#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "support/testutil.hpp"
#include "surfdyn/errors.hpp"
#include "surfdyn/linalg.hpp"
#include "surfdyn/rational.hpp"
#include "surfdyn/spectral.hpp"
#include "surfdyn/surface.hpp"
#include "surfdyn/upoly.hpp"

using namespace surfdyn;

namespace {

using IMatrix = std::vector<std::vector<Int>>;

IMatrix imat(std::vector<std::vector<long>> rows) {
  IMatrix m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  return m;
}

std::vector<Int> icoeffs(std::vector<long> c) {
  return std::vector<Int>(c.begin(), c.end());
}

QVector qv(std::vector<long> entries) {
  return QVector(entries.begin(), entries.end());
}

// Lattice whose nef cone is the nonnegative quadrant of the given rank.
NSLattice quadrant_lattice(int n) {
  NSLattice lat;
  lat.rank = n;
  lat.form.assign(n, std::vector<Int>(n, 0));
  lat.nef_generators.assign(n, std::vector<Int>(n, 0));
  lat.ample.assign(n, Int(1));
  for (int i = 0; i < n; ++i) {
    lat.form[i][i] = 1;
    lat.nef_generators[i][i] = 1;
  }
  return lat;
}

IMatrix random_entries(testutil::Rng& rng, std::size_t n, long lo, long hi) {
  IMatrix m(n, std::vector<Int>(n));
  for (auto& row : m)
    for (auto& e : row) e = static_cast<long>(rng.uniform(lo, hi));
  return m;
}

QMatrix to_q(const IMatrix& m) {
  QMatrix q(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    q[i].assign(m[i].begin(), m[i].end());
  return q;
}

IMatrix int_pow(const IMatrix& m, unsigned n) {
  QMatrix q = mat_pow(to_q(m), n);
  IMatrix out(q.size(), std::vector<Int>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      REQUIRE(q[i][j].get_den() == 1);
      out[i][j] = q[i][j].get_num();
    }
  return out;
}

double eigen_spectral_radius(const IMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m[i][j].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  double rho = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    rho = std::max(rho, std::abs(solver.eigenvalues()[k]));
  return rho;
}

double rho_midpoint(const SpectralResult& r) {
  return (Rational((r.rho_lo + r.rho_hi) / 2)).get_d();
}

// No real root of the characteristic polynomial may exceed rho_hi.
void check_no_root_beyond(const SpectralResult& r) {
  UPolyZ p{r.char_poly};
  p.trim();
  UPolyZ sf = squarefree_part(p);
  Rational beyond = cauchy_bound(sf);
  if (beyond <= r.rho_hi) beyond = r.rho_hi + 1;
  CHECK(count_roots_halfopen(sturm_chain(sf), r.rho_hi, beyond) == 0);
}

}  // namespace

TEST_CASE("pullback construction validates shape and cone preservation") {
  const NSLattice& pp = p1xp1_lattice();
  CHECK_NOTHROW(make_pullback(imat({{2, 2}, {2, 2}}), pp));
  CHECK_NOTHROW(make_pullback(imat({{0, 0}, {0, 0}}), pp));
  CHECK_NOTHROW(make_pullback(imat({{0, 1}, {1, 0}}), pp));
  CHECK_NOTHROW(make_pullback(imat({{3}}), p2_lattice()));

  CHECK_THROWS_AS(make_pullback({}, pp), input_error);
  CHECK_THROWS_AS(make_pullback(imat({{1, 0}}), pp), input_error);
  CHECK_THROWS_AS(make_pullback(imat({{1, 0}, {0, 1}, {0, 0}}), pp),
                  input_error);
  CHECK_THROWS_AS(make_pullback(imat({{1}}), pp), input_error);

  CHECK_THROWS_AS(make_pullback(imat({{1, 0}, {-1, 1}}), pp),
                  precondition_error);
  CHECK_THROWS_AS(make_pullback(imat({{0, -1}, {1, 0}}), pp),
                  precondition_error);
  CHECK_THROWS_AS(make_pullback(imat({{-1}}), p2_lattice()),
                  precondition_error);

  // Skew cone spanned by (2,1) and (1,2): the shear below sends the first
  // generator to (3,1), which lies outside.
  NSLattice skew;
  skew.rank = 2;
  skew.form = {{Int(0), Int(1)}, {Int(1), Int(0)}};
  skew.nef_generators = {{Int(2), Int(1)}, {Int(1), Int(2)}};
  skew.ample = {Int(1), Int(1)};
  CHECK_NOTHROW(make_pullback(imat({{1, 0}, {0, 1}}), skew));
  CHECK_NOTHROW(make_pullback(imat({{0, 1}, {1, 0}}), skew));
  CHECK_THROWS_AS(make_pullback(imat({{1, 1}, {0, 1}}), skew),
                  precondition_error);
}

TEST_CASE("characteristic polynomials of fixed matrices") {
  const NSLattice& pp = p1xp1_lattice();
  CHECK(char_poly(make_pullback(imat({{3, 0}, {0, 1}}), pp)) ==
        icoeffs({3, -4, 1}));
  CHECK(char_poly(make_pullback(imat({{2, 2}, {2, 2}}), pp)) ==
        icoeffs({0, -4, 1}));
  CHECK(char_poly(make_pullback(imat({{0, 0}, {0, 0}}), pp)) ==
        icoeffs({0, 0, 1}));
  CHECK(char_poly(make_pullback(imat({{2, 1}, {1, 1}}), pp)) ==
        icoeffs({1, -3, 1}));

  NSLattice q3 = quadrant_lattice(3);
  CHECK(char_poly(make_pullback(imat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), q3)) ==
        icoeffs({-1, 3, -3, 1}));
  CHECK(char_poly(make_pullback(imat({{7}}), p2_lattice())) ==
        icoeffs({-7, 1}));
}

TEST_CASE("Cayley-Hamilton holds exactly for random integer matrices") {
  testutil::Rng rng(20260815);
  std::vector<NSLattice> lattices;
  for (int n = 1; n <= 6; ++n) lattices.push_back(quadrant_lattice(n));

  for (int it = 0; it < 120; ++it) {
    std::size_t n = 1 + static_cast<std::size_t>(it % 6);
    // char_poly has no cone precondition, so build the value directly.
    PullbackMatrix t{random_entries(rng, n, -9, 9), &lattices[n - 1]};
    std::vector<Int> cp = char_poly(t);
    REQUIRE(cp.size() == n + 1);
    CHECK(cp[n] == 1);

    QMatrix tq = to_q(t.entries);
    QMatrix acc = mat_scale(identity_matrix(n), Rational(cp[n]));
    for (std::size_t k = n; k-- > 0;)
      acc = mat_add(mat_mul(acc, tq),
                    mat_scale(identity_matrix(n), Rational(cp[k])));
    for (const auto& row : acc)
      for (const auto& entry : row) CHECK(entry == 0);
  }
}

TEST_CASE("rational spectral radii and Perron vectors of fixed matrices") {
  const NSLattice& pp = p1xp1_lattice();

  for (long d : {2L, 3L, 5L}) {
    PullbackMatrix t = make_pullback(imat({{d, 0}, {0, 1}}), pp);
    SpectralResult r = analyze_spectrum(t);
    REQUIRE(r.rho_exact.has_value());
    CHECK(*r.rho_exact == d);
    CHECK(r.rho_lo == d);
    CHECK(r.rho_hi == d);
    CHECK(r.perron_exact == qv({1, 0}));
    CHECK(r.cone_certified);
    CHECK_FALSE(r.indeterminate);
    // The invariant fiber class has self-intersection zero.
    DivisorClass v = divisor(pp, r.perron_exact);
    CHECK(intersect(v, v) == 0);
    auto [rank, trace] = rank_and_trace(t);
    CHECK(rank == 2);
    CHECK(trace == d + 1);
    CHECK(krein_rutman_check(t));
    check_no_root_beyond(r);
  }

  {
    PullbackMatrix t = make_pullback(imat({{2, 2}, {2, 2}}), pp);
    SpectralResult r = analyze_spectrum(t);
    REQUIRE(r.rho_exact.has_value());
    CHECK(*r.rho_exact == 4);
    CHECK(r.perron_exact == qv({1, 1}));
    CHECK(r.cone_certified);
    DivisorClass v = divisor(pp, r.perron_exact);
    CHECK(intersect(v, v) == 2);
    auto [rank, trace] = rank_and_trace(t);
    CHECK(rank == 1);
    CHECK(trace == 4);
    CHECK(krein_rutman_check(t));
    check_no_root_beyond(r);
  }

  {
    // Non-diagonalizable: algebraic multiplicity two, geometric one.
    PullbackMatrix t = make_pullback(imat({{2, 1}, {0, 2}}), pp);
    SpectralResult r = analyze_spectrum(t);
    REQUIRE(r.rho_exact.has_value());
    CHECK(*r.rho_exact == 2);
    CHECK(r.perron_exact == qv({1, 0}));
    CHECK(r.cone_certified);
  }

  {
    // Nilpotent: rho = 0 with a one-dimensional kernel.
    PullbackMatrix t = make_pullback(imat({{0, 1}, {0, 0}}), pp);
    SpectralResult r = analyze_spectrum(t);
    REQUIRE(r.rho_exact.has_value());
    CHECK(*r.rho_exact == 0);
    CHECK(r.perron_exact == qv({1, 0}));
    CHECK(r.cone_certified);
  }

  {
    PullbackMatrix t = make_pullback(imat({{0, 0}, {0, 0}}), pp);
    SpectralResult r = analyze_spectrum(t);
    REQUIRE(r.rho_exact.has_value());
    CHECK(*r.rho_exact == 0);
    auto [rank, trace] = rank_and_trace(t);
    CHECK(rank == 0);
    CHECK(trace == 0);
    // Degenerate eigenspace: the first nef generator is returned.
    CHECK(r.perron_exact == qv({1, 0}));
    CHECK(r.cone_certified);
  }
}

TEST_CASE("degenerate eigenspaces fall back to the first fixed nef generator") {
  NSLattice q3 = quadrant_lattice(3);
  PullbackMatrix id3 =
      make_pullback(imat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), q3);
  SpectralResult r = analyze_spectrum(id3);
  REQUIRE(r.rho_exact.has_value());
  CHECK(*r.rho_exact == 1);
  CHECK(r.perron_exact == qv({1, 0, 0}));
  CHECK(r.cone_certified);
  CHECK(krein_rutman_check(id3));

  // Abstract lattice whose generators are not the standard basis: the first
  // listed generator is still the one returned.
  NSLattice abs3;
  abs3.rank = 3;
  abs3.form = {{Int(1), Int(0), Int(0)},
               {Int(0), Int(-1), Int(0)},
               {Int(0), Int(0), Int(-1)}};
  abs3.nef_generators = {{Int(1), Int(0), Int(0)},
                         {Int(1), Int(1), Int(0)},
                         {Int(1), Int(0), Int(1)}};
  abs3.ample = {Int(3), Int(1), Int(1)};
  PullbackMatrix idabs =
      make_pullback(imat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), abs3);
  SpectralResult rabs = analyze_spectrum(idabs);
  CHECK(rabs.perron_exact == qv({1, 0, 0}));
  CHECK(rabs.cone_certified);

  // Two identical blocks: the eigenspace of rho = 2 is two-dimensional but
  // contains no generator of the quadrant, so a kernel vector is returned.
  NSLattice q4 = quadrant_lattice(4);
  PullbackMatrix blocks = make_pullback(
      imat({{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}}), q4);
  SpectralResult rb = analyze_spectrum(blocks);
  REQUIRE(rb.rho_exact.has_value());
  CHECK(*rb.rho_exact == 2);
  REQUIRE(rb.perron_exact.size() == 4);
  QVector image = mat_vec(to_q(blocks.entries), rb.perron_exact);
  bool nonzero = false;
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(image[i] == *rb.rho_exact * rb.perron_exact[i]);
    if (rb.perron_exact[i] != 0) nonzero = true;
    CHECK(rb.perron_exact[i] >= 0);
  }
  CHECK(nonzero);
  CHECK(rb.cone_certified);
}

TEST_CASE("irrational spectral radius is bracketed to the tolerance") {
  const NSLattice& pp = p1xp1_lattice();
  PullbackMatrix t = make_pullback(imat({{2, 1}, {1, 1}}), pp);

  // (3+sqrt(5))/2 = 2.618033988749894848205... to 22 significant digits.
  Rational oracle = make_rational(Int("2618033988749894848205"),
                                  pow_int(10, 21));
  Rational slack = make_rational(1, pow_int(10, 20));

  SpectralResult r = analyze_spectrum(t);
  CHECK_FALSE(r.rho_exact.has_value());
  CHECK(r.rho_hi - r.rho_lo <= default_tolerance());
  CHECK(r.rho_lo <= oracle + slack);
  CHECK(r.rho_hi >= oracle - slack);
  check_no_root_beyond(r);

  REQUIRE(r.perron_interval.size() == 2);
  // Second coordinate of the adjugate column is the constant 1.
  CHECK(r.perron_interval[1].first == 1);
  CHECK(r.perron_interval[1].second == 1);
  // First coordinate is rho - 1 = 1.618033988...
  Rational golden = oracle - 1;
  CHECK(r.perron_interval[0].first <= golden + slack);
  CHECK(r.perron_interval[0].second >= golden - slack);
  CHECK(r.perron_interval[0].first > 1);
  CHECK(r.cone_certified);
  CHECK_FALSE(r.indeterminate);
  CHECK(r.perron_exact.empty());
  CHECK(krein_rutman_check(t));

  // A tighter tolerance narrows the bracket accordingly.
  Rational tight = make_rational(1, pow_int(10, 30));
  SpectralResult rt = analyze_spectrum(t, tight);
  CHECK(rt.rho_hi - rt.rho_lo <= tight);
  CHECK(rt.rho_lo <= oracle + slack);
  CHECK(rt.rho_hi >= oracle - slack);

  // Determinism: the analysis is a pure function of its inputs.
  SpectralResult again = analyze_spectrum(t);
  CHECK(again.rho_lo == r.rho_lo);
  CHECK(again.rho_hi == r.rho_hi);
  CHECK(again.perron_interval == r.perron_interval);

  CHECK_THROWS_AS(spectral_radius(t, Rational(0)), precondition_error);
  CHECK_THROWS_AS(spectral_radius(t, Rational(-1)), precondition_error);
}

TEST_CASE("repeated irrational Perron eigenvalues are refused") {
  NSLattice q4 = quadrant_lattice(4);
  PullbackMatrix t = make_pullback(
      imat({{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}}), q4);
  SpectralResult r = spectral_radius(t);
  CHECK_FALSE(r.rho_exact.has_value());
  CHECK_THROWS_AS(perron_vector(t, r), precondition_error);
}

TEST_CASE("random nonnegative matrices agree with a floating-point eigensolver") {
  testutil::Rng rng(424201);
  std::vector<NSLattice> lattices;
  for (int n = 0; n <= 5; ++n) lattices.push_back(quadrant_lattice(std::max(n, 1)));

  for (int it = 0; it < 100; ++it) {
    std::size_t n = 2 + static_cast<std::size_t>(it % 4);
    // Strictly positive entries keep the Perron root simple.
    IMatrix entries = random_entries(rng, n, 1, 9);
    PullbackMatrix t = make_pullback(entries, lattices[n]);
    SpectralResult r = analyze_spectrum(t);

    double numeric = eigen_spectral_radius(entries);
    CHECK(std::abs(rho_midpoint(r) - numeric) <= 1e-9 * std::max(1.0, numeric));
    CHECK((r.cone_certified || r.indeterminate));
    CHECK(krein_rutman_check(t));
    check_no_root_beyond(r);
  }
}

TEST_CASE("spectral radius of a power is the power of the spectral radius") {
  const NSLattice& pp = p1xp1_lattice();
  testutil::Rng rng(777);

  std::vector<IMatrix> cases = {
      imat({{2, 0}, {0, 1}}), imat({{2, 2}, {2, 2}}), imat({{2, 1}, {1, 1}})};
  for (int extra = 0; extra < 10; ++extra)
    cases.push_back(random_entries(rng, 2, 0, 5));

  NSLattice q3 = quadrant_lattice(3);
  for (int extra = 0; extra < 6; ++extra)
    cases.push_back(random_entries(rng, 3, 1, 6));

  for (const IMatrix& m : cases) {
    const NSLattice& lat = m.size() == 2 ? pp : q3;
    SpectralResult base = spectral_radius(make_pullback(m, lat));
    Rational lo = std::max(base.rho_lo, Rational(0));
    for (unsigned n = 2; n <= 4; ++n) {
      SpectralResult powered =
          spectral_radius(make_pullback(int_pow(m, n), lat));
      Rational expect_lo = pow_rational(lo, n);
      Rational expect_hi = pow_rational(base.rho_hi, n);
      CHECK(expect_lo <= powered.rho_hi);
      CHECK(powered.rho_lo <= expect_hi);
      if (base.rho_exact && powered.rho_exact)
        CHECK(*powered.rho_exact == pow_rational(*base.rho_exact, n));
    }
  }
}

TEST_CASE("rank-one matrices have spectral radius equal to the trace") {
  testutil::Rng rng(90125);
  std::vector<NSLattice> lattices;
  for (int n = 0; n <= 5; ++n) lattices.push_back(quadrant_lattice(std::max(n, 1)));

  for (int it = 0; it < 60; ++it) {
    std::size_t n = 2 + static_cast<std::size_t>(it % 4);
    std::vector<Int> u(n), v(n);
    bool uz = true, vz = true;
    while (uz || vz) {
      uz = vz = true;
      for (auto& e : u) {
        e = static_cast<long>(rng.uniform(0, 6));
        if (e != 0) uz = false;
      }
      for (auto& e : v) {
        e = static_cast<long>(rng.uniform(0, 6));
        if (e != 0) vz = false;
      }
    }
    IMatrix outer(n, std::vector<Int>(n));
    Int trace = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) outer[i][j] = u[i] * v[j];
      trace += u[i] * v[i];
    }
    PullbackMatrix t = make_pullback(outer, lattices[n]);
    auto [rank, tr] = rank_and_trace(t);
    CHECK(rank == 1);
    CHECK(tr == trace);
    SpectralResult r = spectral_radius(t);
    REQUIRE(r.rho_exact.has_value());
    CHECK(*r.rho_exact == trace);

    if (trace > 0) {
      perron_vector(t, r);
      QVector image = mat_vec(to_q(outer), r.perron_exact);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(image[i] == *r.rho_exact * r.perron_exact[i]);
      CHECK(r.cone_certified);
    }
  }
}

TEST_CASE("default tolerance is ten to the minus twelve") {
  CHECK(default_tolerance() == make_rational(1, pow_int(10, 12)));
}
