#pragma once

#include "surfdyn/poly.hpp"
#include "surfdyn/upoly.hpp"

namespace surfdyn {

// Positive rational c such that p/c has coprime integer coefficients.
// Requires p nonzero.
Rational rational_content(const SparsePoly& p);

// p divided by its rational content and, when the graded-lex leading
// coefficient is negative, negated: integer-primitive, positive lead.
SparsePoly make_primitive(const SparsePoly& p);

// Greatest common divisor: primitive, positive leading coefficient in the
// graded-lex order, divides both inputs exactly.  gcd(p, 0) is p normalized;
// gcd(0, 0) = 0; the gcd of nonzero constants is 1.
SparsePoly poly_gcd(const SparsePoly& p, const SparsePoly& q);

// Exact quotient p/d; throws precondition_error when d does not divide p.
SparsePoly exact_divide(const SparsePoly& p, const SparsePoly& d);

bool divides(const SparsePoly& d, const SparsePoly& p);

// Squarefree part of a polynomial that is univariate in `var` (all other
// variables absent): p / gcd(p, dp/dvar), primitive, positive lead.
SparsePoly poly_squarefree(const SparsePoly& p, std::size_t var);

// Sylvester resultant eliminating `var`, with the first argument's
// coefficient rows on top.  Either input may be independent of var, in which
// case Res(p, q) = p^(deg_var q) by convention (and symmetrically).
SparsePoly poly_resultant(const SparsePoly& p, const SparsePoly& q,
                          std::size_t var);

// Conversions for polynomials that are univariate in `var`.
UPolyQ to_upoly(const SparsePoly& p, std::size_t var);
SparsePoly from_upoly(const UPolyZ& u, const SparsePoly& shape,
                      std::size_t var);

}  // namespace surfdyn
