#pragma once

#include <array>
#include <vector>

#include "support/testutil.hpp"
#include "surfdyn/ratmap.hpp"

// Gallery fixtures built term-by-term (deliberately not via the text parser,
// so parser tests can cross-check against these).
namespace fixtures {

using surfdyn::Exponents;
using surfdyn::Rational;
using surfdyn::RationalSelfMap;
using surfdyn::SparsePoly;
using surfdyn::Surface;

inline SparsePoly p2_poly(const std::vector<std::pair<Exponents, Rational>>& terms) {
  return SparsePoly::from_terms(surfdyn::p2_variables(), terms, 0);
}

inline SparsePoly q_poly(const std::vector<std::pair<Exponents, Rational>>& terms) {
  return SparsePoly::from_terms(surfdyn::p1xp1_variables(), terms, 2);
}

// (x*z + y^2, y*z + x^2, x^2 + y^2)
inline RationalSelfMap ex41() {
  return surfdyn::make_map(
      Surface::P2,
      {p2_poly({{{1, 0, 1}, 1}, {{0, 2, 0}, 1}}),
       p2_poly({{{0, 1, 1}, 1}, {{2, 0, 0}, 1}}),
       p2_poly({{{2, 0, 0}, 1}, {{0, 2, 0}, 1}})});
}

// (x^2*y + y^2*z, x*y*z, x^2*y + x*y^2 + 2*y^2*z + z^2*(x + y))
inline RationalSelfMap ex42() {
  return surfdyn::make_map(
      Surface::P2,
      {p2_poly({{{2, 1, 0}, 1}, {{0, 2, 1}, 1}}),
       p2_poly({{{1, 1, 1}, 1}}),
       p2_poly({{{2, 1, 0}, 1}, {{1, 2, 0}, 1}, {{0, 2, 1}, 2}, {{1, 0, 2}, 1},
                {{0, 1, 2}, 1}})});
}

// (t0*t1*w0*w1 : t0^2*w1^2 - eps*t1^2*w0^2) x
// (t0*w1*(t0*w0 - eps*t1*w1) : t0^2*w1^2 - (t0*w0 - t1*w1)^2)
inline RationalSelfMap feps(const Rational& eps) {
  return surfdyn::make_map(
      Surface::P1xP1,
      {q_poly({{{1, 1, 1, 1}, 1}}),
       q_poly({{{2, 0, 0, 2}, 1}, {{0, 2, 2, 0}, -eps}}),
       q_poly({{{2, 0, 1, 1}, 1}, {{1, 1, 0, 2}, -eps}}),
       q_poly({{{2, 0, 0, 2}, 1},
               {{2, 0, 2, 0}, -1},
               {{1, 1, 1, 1}, 2},
               {{0, 2, 0, 2}, -1}})});
}

inline RationalSelfMap ex44() { return feps(1); }

// Projective equality of points, blockwise.
inline bool proj_equal_block(const std::vector<Rational>& a,
                             const std::vector<Rational>& b, std::size_t lo,
                             std::size_t hi) {
  for (std::size_t i = lo; i < hi; ++i) {
    for (std::size_t j = i + 1; j < hi; ++j) {
      if (a[i] * b[j] != a[j] * b[i]) return false;
    }
  }
  return true;
}

inline bool proj_equal(Surface s, const std::vector<Rational>& a,
                       const std::vector<Rational>& b) {
  if (s == Surface::P2) return proj_equal_block(a, b, 0, 3);
  return proj_equal_block(a, b, 0, 2) && proj_equal_block(a, b, 2, 4);
}

// Random homogeneous / bihomogeneous components for property tests.
inline SparsePoly random_hom(testutil::Rng& rng, std::uint32_t d) {
  std::vector<std::pair<Exponents, Rational>> terms;
  for (std::uint32_t i = 0; i <= d; ++i) {
    for (std::uint32_t j = 0; i + j <= d; ++j) {
      if (rng.uniform(0, 2) == 0) continue;
      long c = rng.uniform(-3, 3);
      if (c != 0) terms.push_back({{i, j, d - i - j}, Rational(c)});
    }
  }
  return p2_poly(terms);
}

inline SparsePoly random_bihom(testutil::Rng& rng, std::uint32_t a,
                               std::uint32_t b) {
  std::vector<std::pair<Exponents, Rational>> terms;
  for (std::uint32_t i = 0; i <= a; ++i) {
    for (std::uint32_t j = 0; j <= b; ++j) {
      if (rng.uniform(0, 2) == 0) continue;
      long c = rng.uniform(-3, 3);
      if (c != 0) terms.push_back({{i, a - i, j, b - j}, Rational(c)});
    }
  }
  return q_poly(terms);
}

inline RationalSelfMap random_p2_map(testutil::Rng& rng, std::uint32_t d) {
  for (;;) {
    std::vector<SparsePoly> comps{random_hom(rng, d), random_hom(rng, d),
                                  random_hom(rng, d)};
    bool any = false;
    for (const auto& c : comps) any = any || !c.is_zero();
    if (any) return surfdyn::make_map(Surface::P2, std::move(comps));
  }
}

inline RationalSelfMap random_p1xp1_map(testutil::Rng& rng, std::uint32_t a1,
                                        std::uint32_t b1, std::uint32_t a2,
                                        std::uint32_t b2) {
  for (;;) {
    std::vector<SparsePoly> comps{
        random_bihom(rng, a1, b1), random_bihom(rng, a1, b1),
        random_bihom(rng, a2, b2), random_bihom(rng, a2, b2)};
    if ((comps[0].is_zero() && comps[1].is_zero()) ||
        (comps[2].is_zero() && comps[3].is_zero())) {
      continue;
    }
    return surfdyn::make_map(Surface::P1xP1, std::move(comps));
  }
}

}  // namespace fixtures
