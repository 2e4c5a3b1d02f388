#pragma once

#include <cstddef>
#include <vector>

#include "surfdyn/rational.hpp"

namespace surfdyn {

// Dense exact matrices over Q, row-major. Sizes stay tiny (NS-lattice ranks),
// so plain Gaussian elimination is the right tool.
using QVector = std::vector<Rational>;
using QMatrix = std::vector<std::vector<Rational>>;

QMatrix identity_matrix(std::size_t n);
QMatrix mat_mul(const QMatrix& a, const QMatrix& b);
QVector mat_vec(const QMatrix& a, const QVector& v);
QMatrix mat_pow(const QMatrix& a, unsigned n);
QMatrix mat_scale(const QMatrix& a, const Rational& c);
QMatrix mat_add(const QMatrix& a, const QMatrix& b);
Rational mat_trace(const QMatrix& a);
Rational determinant(QMatrix a);
std::size_t matrix_rank(QMatrix a);

struct LinearSolution {
  bool consistent = false;
  bool unique = false;
  QVector solution;  // free variables set to 0; meaningful iff consistent
};

// Solve a*x = b for a general m-by-n matrix.
LinearSolution solve_linear(QMatrix a, QVector b);

// Basis of the right kernel of a.
std::vector<QVector> kernel_basis(QMatrix a);

}  // namespace surfdyn
