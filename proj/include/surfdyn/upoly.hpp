#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "surfdyn/rational.hpp"

namespace surfdyn {

// Dense univariate polynomials, coefficients ascending by exponent.  The
// integer form is kept trimmed (no trailing zero) and is the workhorse for
// gcd, squarefree parts, Sturm chains and root isolation; the multivariate
// layer converts down to it whenever a computation is univariate.
struct UPolyZ {
  std::vector<Int> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 if zero
  bool is_zero() const { return c.empty(); }
  void trim();
  friend bool operator==(const UPolyZ&, const UPolyZ&) = default;
};

struct UPolyQ {
  std::vector<Rational> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  void trim();
};

// Clears denominators and divides by the integer content; the result has
// positive leading coefficient.  Zero maps to zero.
UPolyZ primitive_z(const UPolyQ& p);
UPolyZ primitive_z(UPolyZ p);

UPolyQ to_q(const UPolyZ& p);

Rational eval(const UPolyZ& p, const Rational& x);
Rational eval(const UPolyQ& p, const Rational& x);

UPolyZ derivative(const UPolyZ& p);

// Quotient and remainder over the rationals; divisor nonzero.
std::pair<UPolyQ, UPolyQ> divrem(const UPolyQ& a, const UPolyQ& b);

// Primitive positive-leading gcd (primitive PRS).  gcd(0, p) = primitive p.
UPolyZ gcd_z(const UPolyZ& a, const UPolyZ& b);

// Exact quotient; throws precondition_error when division is not exact.
UPolyQ exact_div(const UPolyQ& a, const UPolyQ& b);

// p / gcd(p, p'), primitive with positive leading coefficient.
UPolyZ squarefree_part(const UPolyZ& p);

// Strict upper bound on the absolute value of every real root.
Rational cauchy_bound(const UPolyZ& p);

// Sturm chain of a squarefree polynomial; each element primitive.
std::vector<UPolyZ> sturm_chain(const UPolyZ& squarefree);

// Number of distinct real roots in the half-open interval (a, b], a <= b.
// Valid even when a or b is itself a root (zero signs are dropped, which
// makes the variation count right-continuous).
int count_roots_halfopen(const std::vector<UPolyZ>& chain, const Rational& a,
                         const Rational& b);

struct RootInterval {
  Rational lo, hi;              // the root lies in (lo, hi]
  std::optional<Rational> exact;  // set when the root is known rationally
};

// Locates the largest real root of a squarefree polynomial: rational
// candidates (divisors of the trailing over divisors of the leading
// coefficient, when enumerable) are tested for exactness first; otherwise the
// root is isolated by Sturm bisection and narrowed to width <= tolerance.
// Guarantees no real root exceeds hi.  nullopt when there is no real root.
std::optional<RootInterval> largest_real_root(const UPolyZ& squarefree,
                                              const Rational& tolerance);

// Narrows an isolating interval (lo, hi] of a squarefree polynomial until
// hi - lo <= width, preserving the half-open containment.
RootInterval narrow(const std::vector<UPolyZ>& chain, RootInterval iv,
                    const Rational& width);

}  // namespace surfdyn
