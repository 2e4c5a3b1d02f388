#include "surfdyn/linalg.hpp"

#include <utility>

#include "surfdyn/errors.hpp"

namespace surfdyn {

namespace {

void check_rectangular(const QMatrix& a) {
  if (a.empty()) throw precondition_error("empty matrix");
  for (const auto& row : a) {
    if (row.size() != a[0].size()) throw precondition_error("ragged matrix");
  }
}

void check_square(const QMatrix& a) {
  check_rectangular(a);
  if (a.size() != a[0].size()) throw precondition_error("matrix is not square");
}

// Row echelon form in place; returns pivot column per pivot row and the
// accumulated sign of the row swaps.
std::pair<std::vector<std::size_t>, int> echelonize(QMatrix& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  std::vector<std::size_t> pivot_cols;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Rational factor = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  return {pivot_cols, sign};
}

}  // namespace

QMatrix identity_matrix(std::size_t n) {
  QMatrix m(n, QVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
  check_rectangular(a);
  check_rectangular(b);
  if (a[0].size() != b.size()) throw precondition_error("matrix size mismatch in product");
  QMatrix out(a.size(), QVector(b[0].size(), Rational(0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

QVector mat_vec(const QMatrix& a, const QVector& v) {
  check_rectangular(a);
  if (a[0].size() != v.size()) throw precondition_error("matrix/vector size mismatch");
  QVector out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  }
  return out;
}

QMatrix mat_pow(const QMatrix& a, unsigned n) {
  check_square(a);
  QMatrix result = identity_matrix(a.size());
  QMatrix base = a;
  while (n > 0) {
    if (n & 1u) result = mat_mul(result, base);
    n >>= 1u;
    if (n > 0) base = mat_mul(base, base);
  }
  return result;
}

QMatrix mat_scale(const QMatrix& a, const Rational& c) {
  QMatrix out = a;
  for (auto& row : out) {
    for (auto& entry : row) entry *= c;
  }
  return out;
}

QMatrix mat_add(const QMatrix& a, const QMatrix& b) {
  check_rectangular(a);
  check_rectangular(b);
  if (a.size() != b.size() || a[0].size() != b[0].size()) {
    throw precondition_error("matrix size mismatch in sum");
  }
  QMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) out[i][j] += b[i][j];
  }
  return out;
}

Rational mat_trace(const QMatrix& a) {
  check_square(a);
  Rational t(0);
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

Rational determinant(QMatrix a) {
  check_square(a);
  const std::size_t n = a.size();
  auto [pivots, sign] = echelonize(a);
  if (pivots.size() < n) return Rational(0);
  Rational det(sign);
  for (std::size_t i = 0; i < n; ++i) det *= a[i][pivots[i]];
  return det;
}

std::size_t matrix_rank(QMatrix a) {
  check_rectangular(a);
  return echelonize(a).first.size();
}

LinearSolution solve_linear(QMatrix a, QVector b) {
  check_rectangular(a);
  if (a.size() != b.size()) throw precondition_error("matrix/vector size mismatch");
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
  auto pivots = echelonize(a).first;

  LinearSolution out;
  // A pivot in the augmented column means an inconsistent row 0 = c.
  if (!pivots.empty() && pivots.back() == cols) return out;
  out.consistent = true;
  out.unique = pivots.size() == cols;
  out.solution.assign(cols, Rational(0));
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const std::size_t c = pivots[k];
    Rational acc = a[k][cols];
    for (std::size_t j = c + 1; j < cols; ++j) acc -= a[k][j] * out.solution[j];
    out.solution[c] = acc / a[k][c];
  }
  return out;
}

std::vector<QVector> kernel_basis(QMatrix a) {
  check_rectangular(a);
  const std::size_t cols = a[0].size();
  auto pivots = echelonize(a).first;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<QVector> basis;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    QVector v(cols, Rational(0));
    v[free_col] = 1;
    for (std::size_t k = pivots.size(); k-- > 0;) {
      const std::size_t c = pivots[k];
      if (c > free_col) continue;
      Rational acc(0);
      for (std::size_t j = c + 1; j < cols; ++j) acc -= a[k][j] * v[j];
      v[c] = acc / a[k][c];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace surfdyn
