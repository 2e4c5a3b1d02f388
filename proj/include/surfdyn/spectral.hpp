#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "surfdyn/linalg.hpp"
#include "surfdyn/rational.hpp"
#include "surfdyn/surface.hpp"

namespace surfdyn {

// A square integer matrix acting on an NS-lattice and preserving its nef
// cone.  Cone preservation (the Krein-Rutman hypothesis) is checked at
// construction: the image of every nef generator must again be nef.
struct PullbackMatrix {
  std::vector<std::vector<Int>> entries;
  const NSLattice* lattice = nullptr;
};

PullbackMatrix make_pullback(std::vector<std::vector<Int>> entries,
                             const NSLattice& lattice);

struct SpectralResult {
  std::vector<Int> char_poly;  // ascending coefficients, monic
  std::optional<Rational> rho_exact;
  Rational rho_lo, rho_hi;  // a real root lies in [lo, hi]; none exceeds hi
  // Exactly one of the following is populated by perron_vector.
  std::vector<Rational> perron_exact;
  std::vector<std::pair<Rational, Rational>> perron_interval;
  bool cone_certified = false;
  bool indeterminate = false;  // cone membership undecided at the tolerance
};

Rational default_tolerance();  // 10^-12

// det(xI - T), exact, by the Faddeev-LeVerrier recurrence.
std::vector<Int> char_poly(const PullbackMatrix& t);

// Locates rho(T) as the largest real root of the characteristic polynomial
// (justified by cone preservation): exact when the root is rational,
// otherwise an isolating interval of width <= tolerance.
SpectralResult spectral_radius(const PullbackMatrix& t,
                               const Rational& tolerance = default_tolerance());

// Fills the Perron vector fields of a spectral_radius result.  Rational rho:
// exact kernel vector of (T - rho I), first nonzero coordinate normalized to
// 1; a degenerate eigenspace instead returns the first nef generator fixed by
// T up to rho.  Irrational rho: a column of adj(rho I - T) with exact
// zero-tests and interval entries, refined until every sign is decided.
void perron_vector(const PullbackMatrix& t, SpectralResult& result);

// spectral_radius + perron_vector in one call.
SpectralResult analyze_spectrum(const PullbackMatrix& t,
                                const Rational& tolerance = default_tolerance());

std::pair<std::size_t, Int> rank_and_trace(const PullbackMatrix& t);

// The Krein-Rutman conclusion, checked: the rho interval contains a real
// root and the Perron vector is cone-certified (or explicitly flagged
// indeterminate).
bool krein_rutman_check(const PullbackMatrix& t,
                        const Rational& tolerance = default_tolerance());

}  // namespace surfdyn
