#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "support/testutil.hpp"
#include "surfdyn/errors.hpp"
#include "surfdyn/linalg.hpp"
#include "surfdyn/surface.hpp"

using namespace surfdyn;
using nlohmann::json;

namespace {

QVector qv(std::vector<long> entries) {
  QVector out;
  for (long e : entries) out.emplace_back(e);
  return out;
}

QMatrix random_matrix(testutil::Rng& rng, std::size_t rows, std::size_t cols) {
  QMatrix m(rows, QVector(cols, Rational(0)));
  for (auto& row : m) {
    for (auto& entry : row) entry = rng.rational(6, 3);
  }
  return m;
}

DivisorClass random_nef(testutil::Rng& rng, const NSLattice& lat) {
  QVector coeffs;
  for (int i = 0; i < lat.rank; ++i) {
    coeffs.emplace_back(rng.uniform(0, 7));
  }
  QVector coords(static_cast<std::size_t>(lat.rank), Rational(0));
  for (std::size_t k = 0; k < lat.nef_generators.size(); ++k) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      coords[i] += coeffs[k] * Rational(lat.nef_generators[k][i]);
    }
  }
  return divisor(lat, coords);
}

}  // namespace

TEST_CASE("linalg: determinant matches cofactor expansion") {
  testutil::Rng rng(920);
  for (int it = 0; it < 120; ++it) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    QMatrix m = random_matrix(rng, n, n);
    CHECK(determinant(m) == testutil::cofactor_det(m));
  }
  CHECK(determinant({{Rational(0)}}) == 0);
  CHECK_THROWS_AS(determinant({{Rational(1), Rational(2)}}), precondition_error);
}

TEST_CASE("linalg: solve, rank, kernel") {
  testutil::Rng rng(921);
  int unique_seen = 0;
  for (int it = 0; it < 120; ++it) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    QMatrix m = random_matrix(rng, n, n);
    QVector x(n);
    for (auto& e : x) e = rng.rational(5, 2);
    QVector b = mat_vec(m, x);
    auto sol = solve_linear(m, b);
    REQUIRE(sol.consistent);
    CHECK(mat_vec(m, sol.solution) == b);
    if (sol.unique) {
      ++unique_seen;
      CHECK(sol.solution == x);
      CHECK(determinant(m) != 0);
      CHECK(matrix_rank(m) == n);
      CHECK(kernel_basis(m).empty());
    } else {
      CHECK(determinant(m) == 0);
      auto ker = kernel_basis(m);
      REQUIRE(ker.size() == n - matrix_rank(m));
      for (const auto& v : ker) {
        CHECK(mat_vec(m, v) == QVector(n, Rational(0)));
      }
    }
  }
  CHECK(unique_seen > 60);

  // Inconsistent system: x + y = 1 and x + y = 2.
  auto bad = solve_linear({{Rational(1), Rational(1)}, {Rational(1), Rational(1)}},
                          qv({1, 2}));
  CHECK_FALSE(bad.consistent);

  auto wide = solve_linear({{Rational(1), Rational(1)}}, qv({3}));
  CHECK(wide.consistent);
  CHECK_FALSE(wide.unique);
}

TEST_CASE("linalg: powers and trace") {
  QMatrix m{{Rational(2), Rational(1)}, {Rational(1), Rational(1)}};
  CHECK(mat_pow(m, 0) == identity_matrix(2));
  CHECK(mat_pow(m, 1) == m);
  CHECK(mat_pow(m, 3) == mat_mul(m, mat_mul(m, m)));
  CHECK(mat_trace(m) == 3);
  CHECK(mat_trace(mat_pow(m, 2)) == 7);
}

TEST_CASE("builtin lattices have the documented shape") {
  const auto& p2 = p2_lattice();
  CHECK(p2.rank == 1);
  CHECK(p2.form == std::vector<std::vector<Int>>{{1}});
  CHECK(p2.nef_generators == std::vector<std::vector<Int>>{{1}});
  CHECK(p2.ample == std::vector<Int>{1});

  const auto& q = p1xp1_lattice();
  CHECK(q.rank == 2);
  CHECK(q.form == std::vector<std::vector<Int>>{{0, 1}, {1, 0}});
  CHECK(q.nef_generators == std::vector<std::vector<Int>>{{1, 0}, {0, 1}});
  CHECK(q.ample == std::vector<Int>{1, 1});

  // H is nef with positive self-intersection on both surfaces.
  for (const NSLattice* lat : {&p2, &q}) {
    auto h = ample_class(*lat);
    CHECK(is_nef(h));
    CHECK(intersect(h, h) > 0);
  }
  CHECK(&builtin_lattice(Surface::P2) == &p2);
  CHECK(&builtin_lattice(Surface::P1xP1) == &q);

  CHECK(surface_name(Surface::P2) == "P2");
  CHECK(surface_name(Surface::P1xP1) == "P1xP1");
  CHECK(surface_from_name("P1xP1") == Surface::P1xP1);
  CHECK_THROWS_AS(surface_from_name("P3"), input_error);
}

TEST_CASE("intersection pairing: fixed values") {
  const auto& q = p1xp1_lattice();
  CHECK(intersect(divisor(q, qv({1, 0})), divisor(q, qv({0, 1}))) == 1);
  CHECK(intersect(divisor(q, qv({1, 0})), divisor(q, qv({1, 0}))) == 0);
  CHECK(intersect(divisor(q, qv({0, 1})), divisor(q, qv({0, 1}))) == 0);
  CHECK(intersect(divisor(q, qv({2, 3})), divisor(q, qv({5, 7}))) == 2 * 7 + 3 * 5);

  const auto& p2 = p2_lattice();
  for (long d : {1L, 2L, 3L, 7L}) {
    CHECK(intersect(divisor(p2, qv({d})), divisor(p2, qv({d}))) == d * d);
  }

  CHECK_THROWS_AS(intersect(divisor(p2, qv({1})), divisor(q, qv({1, 1}))),
                  precondition_error);
  CHECK_THROWS_AS(divisor(q, qv({1})), precondition_error);
}

TEST_CASE("intersection pairing: bilinear and symmetric") {
  testutil::Rng rng(922);
  json abstract = {
      {"rank", 3},
      {"form", {{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}},
      {"nef_generators", {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}}},
      {"ample", {3, 1, 1}},
  };
  NSLattice cubic = lattice_from_json(abstract);
  const std::vector<const NSLattice*> lattices{&p2_lattice(), &p1xp1_lattice(), &cubic};
  for (int it = 0; it < 120; ++it) {
    const auto* lat = lattices[static_cast<std::size_t>(rng.uniform(0, 2))];
    const auto r = static_cast<std::size_t>(lat->rank);
    QVector av(r), bv(r), cv(r);
    for (std::size_t i = 0; i < r; ++i) {
      av[i] = rng.rational(7, 3);
      bv[i] = rng.rational(7, 3);
      cv[i] = rng.rational(7, 3);
    }
    Rational s = rng.rational(5, 2);
    auto a = divisor(*lat, av), b = divisor(*lat, bv), c = divisor(*lat, cv);
    CHECK(intersect(a, b) == intersect(b, a));
    QVector sum(r);
    for (std::size_t i = 0; i < r; ++i) sum[i] = bv[i] + s * cv[i];
    auto bc = divisor(*lat, sum);
    CHECK(intersect(a, bc) == intersect(a, b) + s * intersect(a, c));
  }
}

TEST_CASE("nef cone membership") {
  const auto& q = p1xp1_lattice();
  CHECK(is_nef(divisor(q, qv({1, 1}))));
  CHECK(is_nef(divisor(q, qv({0, 0}))));
  CHECK(is_nef(divisor(q, qv({5, 0}))));
  CHECK_FALSE(is_nef(divisor(q, qv({1, -1}))));
  CHECK_FALSE(is_nef(divisor(q, qv({-1, 0}))));
  const auto& p2 = p2_lattice();
  CHECK(is_nef(divisor(p2, qv({0}))));
  CHECK(is_nef(divisor(p2, qv({4}))));
  CHECK_FALSE(is_nef(divisor(p2, qv({-1}))));

  testutil::Rng rng(923);
  for (int it = 0; it < 100; ++it) {
    auto a = random_nef(rng, q);
    CHECK(is_nef(a));
    // Leaving the cone: make one coordinate negative.
    QVector coords = a.coords;
    coords[static_cast<std::size_t>(rng.uniform(0, 1))] = Rational(-1 - rng.uniform(0, 5));
    CHECK_FALSE(is_nef(divisor(q, coords)));
  }
}

TEST_CASE("nef cone membership on a skew abstract cone") {
  json j = {
      {"rank", 2},
      {"form", {{0, 1}, {1, 0}}},
      {"nef_generators", {{2, 1}, {1, 2}}},
      {"ample", {3, 3}},
  };
  NSLattice lat = lattice_from_json(j);
  CHECK(is_nef(divisor(lat, qv({3, 3}))));
  CHECK(is_nef(divisor(lat, qv({2, 1}))));
  CHECK_FALSE(is_nef(divisor(lat, qv({1, 0}))));  // outside the skew cone
  CHECK_FALSE(is_nef(divisor(lat, qv({-1, -1}))));
}

TEST_CASE("over-generated cones are rejected") {
  json j = {
      {"rank", 2},
      {"form", {{0, 1}, {1, 0}}},
      {"nef_generators", {{1, 0}, {0, 1}, {1, 1}}},
      {"ample", {1, 1}},
  };
  NSLattice lat = lattice_from_json(j);
  CHECK_THROWS_AS(is_nef(divisor(lat, qv({1, 1}))), unsupported_cone_error);
}

TEST_CASE("hodge index inequality on nef pairs") {
  testutil::Rng rng(924);
  const auto& p2 = p2_lattice();
  const auto& q = p1xp1_lattice();
  int checked = 0;
  for (int it = 0; it < 110; ++it) {
    auto a2 = random_nef(rng, p2);
    auto b2 = random_nef(rng, p2);
    CHECK(hodge_index_check(a2, b2));
    auto a = random_nef(rng, q);
    auto b = random_nef(rng, q);
    CHECK(hodge_index_check(a, b));
    checked += 2;
  }
  CHECK(checked >= 200);

  // Equality at a = b.
  auto h = ample_class(q);
  CHECK(hodge_index_check(h, h));
  CHECK(intersect(h, h) * intersect(h, h) ==
        intersect(h, h) * intersect(h, h));
  // (1,0).(0,1) = 1 >= 0 = product of self-intersections.
  CHECK(hodge_index_check(divisor(q, qv({1, 0})), divisor(q, qv({0, 1}))));

  CHECK_THROWS_AS(hodge_index_check(divisor(q, qv({1, -1})), h), precondition_error);
  CHECK_THROWS_AS(hodge_index_check(ample_class(p2_lattice()), h), precondition_error);
}

TEST_CASE("abstract lattice json parsing") {
  json good = {
      {"rank", 2},
      {"form", {{0, 1}, {1, 0}}},
      {"nef_generators", {{1, 0}, {0, 1}}},
      {"ample", {1, 1}},
  };
  NSLattice lat = lattice_from_json(good);
  CHECK(lat.rank == 2);
  CHECK(lat.form[0][1] == 1);
  CHECK(is_nef(ample_class(lat)));

  auto expect_input_error = [](json j) {
    CHECK_THROWS_AS(lattice_from_json(j), input_error);
  };
  expect_input_error(json::array());
  json missing = good;
  missing.erase("ample");
  expect_input_error(missing);
  json asym = good;
  asym["form"] = {{0, 1}, {2, 0}};
  expect_input_error(asym);
  json ragged = good;
  ragged["form"] = {{0, 1}, {1}};
  expect_input_error(ragged);
  json bad_rank = good;
  bad_rank["rank"] = 0;
  expect_input_error(bad_rank);
  json bad_gen = good;
  bad_gen["nef_generators"] = {{1, 0, 0}};
  expect_input_error(bad_gen);
  json frac = good;
  frac["ample"] = {1.5, 1};
  expect_input_error(frac);
}
