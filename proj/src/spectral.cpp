#include "surfdyn/spectral.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "surfdyn/errors.hpp"
#include "surfdyn/upoly.hpp"

namespace surfdyn {

namespace {

using IMatrix = std::vector<std::vector<Int>>;

IMatrix int_identity(std::size_t n) {
  IMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IMatrix int_mul(const IMatrix& a, const IMatrix& b) {
  std::size_t n = a.size();
  IMatrix out(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

QMatrix to_q_matrix(const IMatrix& m) {
  QMatrix q(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    q[i].assign(m[i].begin(), m[i].end());
  return q;
}

// Faddeev-LeVerrier: B_0 = I, A_k = T B_{k-1}, c_k = -tr(A_k)/k,
// B_k = A_k + c_k I.  Then det(xI - T) = sum c_k x^{n-k} (c_0 = 1) and
// adj(xI - T) = sum_{k<n} B_k x^{n-1-k}; everything stays integral.
struct Leverrier {
  std::vector<Int> coeff;        // c_0..c_n
  std::vector<IMatrix> adjugate;  // B_0..B_{n-1}
};

Leverrier leverrier(const IMatrix& t) {
  std::size_t n = t.size();
  Leverrier out;
  out.coeff.assign(n + 1, Int(0));
  out.coeff[0] = 1;
  IMatrix b = int_identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    out.adjugate.push_back(b);
    IMatrix a = int_mul(t, b);
    Int tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += a[i][i];
    if (tr % Int(k) != 0)
      throw error("characteristic polynomial recurrence lost integrality");
    out.coeff[k] = -tr / Int(k);
    b = std::move(a);
    for (std::size_t i = 0; i < n; ++i) b[i][i] += out.coeff[k];
  }
  return out;
}

UPolyZ char_upoly(const std::vector<Int>& ascending) {
  UPolyZ p{ascending};
  p.trim();
  return p;
}

// The (i,j) entry of adj(xI - T) as a dense polynomial in x.
UPolyZ adjugate_entry(const Leverrier& fl, std::size_t i, std::size_t j) {
  std::size_t n = fl.adjugate.size();
  UPolyZ p;
  p.c.assign(n, Int(0));
  for (std::size_t k = 0; k < n; ++k) p.c[n - 1 - k] = fl.adjugate[k][i][j];
  p.trim();
  return p;
}

// Exact test for q(rho) == 0 where rho is the unique root of the squarefree
// polynomial sf inside (lo, hi]: q vanishes at rho iff gcd(q, sf) does.
bool vanishes_at_root(const UPolyZ& q, const UPolyZ& sf, const Rational& lo,
                      const Rational& hi) {
  if (q.is_zero()) return true;
  UPolyZ g = gcd_z(q, sf);
  if (g.degree() < 1) return false;
  return count_roots_halfopen(sturm_chain(g), lo, hi) == 1;
}

struct QInterval {
  Rational lo, hi;
};

QInterval interval_mul(const QInterval& a, const QInterval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo,
           p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

// Interval Horner evaluation of an integer polynomial over [lo, hi].
QInterval interval_eval(const UPolyZ& p, const QInterval& x) {
  if (p.is_zero()) return {Rational(0), Rational(0)};
  QInterval acc{Rational(p.c.back()), Rational(p.c.back())};
  for (std::size_t k = p.c.size() - 1; k-- > 0;) {
    acc = interval_mul(acc, x);
    acc.lo += p.c[k];
    acc.hi += p.c[k];
  }
  return acc;
}

void perron_rational(const PullbackMatrix& t, SpectralResult& result) {
  const NSLattice& lat = *t.lattice;
  std::size_t n = t.entries.size();
  const Rational rho = *result.rho_exact;

  QMatrix m = to_q_matrix(t.entries);
  for (std::size_t i = 0; i < n; ++i) m[i][i] -= rho;
  std::vector<QVector> kernel = kernel_basis(m);
  if (kernel.empty())
    throw error("no eigenvector at the computed spectral radius");

  if (kernel.size() > 1) {
    // Degenerate eigenspace: fixed deterministic convention, the first nef
    // generator that is an eigenvector for rho.
    for (const auto& gen : lat.nef_generators) {
      QVector g(gen.begin(), gen.end());
      QVector image = mat_vec(to_q_matrix(t.entries), g);
      bool fixed = true;
      for (std::size_t i = 0; i < n; ++i)
        if (image[i] != rho * g[i]) {
          fixed = false;
          break;
        }
      if (fixed) {
        result.perron_exact = std::move(g);
        result.cone_certified = true;
        return;
      }
    }
  }

  QVector v = kernel.front();
  std::size_t first = 0;
  while (first < n && v[first] == 0) ++first;
  Rational lead = v[first];
  for (auto& c : v) c /= lead;
  result.cone_certified = is_nef(divisor(lat, v));
  result.perron_exact = std::move(v);
}

void perron_irrational(const PullbackMatrix& t, const Leverrier& fl,
                       SpectralResult& result) {
  std::size_t n = t.entries.size();
  UPolyZ sf = squarefree_part(char_upoly(result.char_poly));
  std::vector<UPolyZ> chain = sturm_chain(sf);
  RootInterval iv{result.rho_lo, result.rho_hi, std::nullopt};

  // A column of adj(rho I - T) is an eigenvector; pick the first column that
  // is not identically zero at rho (all zero would mean a repeated Perron
  // eigenvalue, which has no exact representative in this representation).
  std::vector<UPolyZ> column(n);
  std::vector<bool> is_zero(n, false);
  bool found = false;
  for (std::size_t j = 0; j < n && !found; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = adjugate_entry(fl, i, j);
      is_zero[i] = vanishes_at_root(column[i], sf, iv.lo, iv.hi);
      if (!is_zero[i]) found = true;
    }
  }
  if (!found)
    throw precondition_error(
        "degenerate eigenspace at an irrational spectral radius");

  std::size_t first = 0;
  while (is_zero[first]) ++first;

  // Narrow the root interval until every nonzero entry has a decided sign.
  std::vector<QInterval> values(n);
  bool decided = false;
  for (int round = 0; round < 64 && !decided; ++round) {
    decided = true;
    QInterval x{iv.lo, iv.hi};
    for (std::size_t i = 0; i < n; ++i) {
      if (is_zero[i]) {
        values[i] = {Rational(0), Rational(0)};
        continue;
      }
      values[i] = interval_eval(column[i], x);
      if (sign(values[i].lo) * sign(values[i].hi) <= 0) decided = false;
    }
    if (!decided) iv = narrow(chain, iv, (iv.hi - iv.lo) / 2);
  }
  result.rho_lo = iv.lo;
  result.rho_hi = iv.hi;

  bool flip = decided && sign(values[first].hi) < 0;
  if (flip)
    for (auto& v : values) v = {-v.hi, -v.lo};

  result.perron_interval.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.perron_interval[i] = {values[i].lo, values[i].hi};

  if (!decided) {
    result.indeterminate = true;
    result.cone_certified = false;
    return;
  }
  bool nonneg = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_zero[i] && sign(values[i].lo) < 0) nonneg = false;
  result.cone_certified = nonneg;  // some entry is positive, so the sum is too
}

}  // namespace

PullbackMatrix make_pullback(std::vector<std::vector<Int>> entries,
                             const NSLattice& lattice) {
  std::size_t n = entries.size();
  if (n == 0 || n != static_cast<std::size_t>(lattice.rank))
    throw input_error("pullback matrix must be square of the lattice rank");
  for (const auto& row : entries)
    if (row.size() != n)
      throw input_error("pullback matrix must be square of the lattice rank");

  PullbackMatrix t{std::move(entries), &lattice};
  QMatrix q = to_q_matrix(t.entries);
  for (const auto& gen : lattice.nef_generators) {
    QVector g(gen.begin(), gen.end());
    if (!is_nef(divisor(lattice, mat_vec(q, g))))
      throw precondition_error(
          "matrix does not preserve the nef cone: image of a generator "
          "is not nef");
  }
  return t;
}

Rational default_tolerance() {
  return make_rational(1, pow_int(10, 12));
}

std::vector<Int> char_poly(const PullbackMatrix& t) {
  Leverrier fl = leverrier(t.entries);
  std::size_t n = t.entries.size();
  std::vector<Int> ascending(n + 1);
  for (std::size_t k = 0; k <= n; ++k) ascending[n - k] = fl.coeff[k];
  return ascending;
}

SpectralResult spectral_radius(const PullbackMatrix& t,
                               const Rational& tolerance) {
  if (sign(tolerance) <= 0)
    throw precondition_error("tolerance must be positive");
  SpectralResult result;
  result.char_poly = char_poly(t);
  UPolyZ sf = squarefree_part(char_upoly(result.char_poly));
  std::optional<RootInterval> root = largest_real_root(sf, tolerance);
  if (!root)
    throw precondition_error(
        "characteristic polynomial has no real root; the cone hypothesis "
        "cannot hold");
  if (root->exact) {
    result.rho_exact = *root->exact;
    result.rho_lo = *root->exact;
    result.rho_hi = *root->exact;
  } else {
    result.rho_lo = root->lo;
    result.rho_hi = root->hi;
  }
  return result;
}

void perron_vector(const PullbackMatrix& t, SpectralResult& result) {
  if (result.rho_exact) {
    perron_rational(t, result);
  } else {
    Leverrier fl = leverrier(t.entries);
    perron_irrational(t, fl, result);
  }
}

SpectralResult analyze_spectrum(const PullbackMatrix& t,
                                const Rational& tolerance) {
  SpectralResult result = spectral_radius(t, tolerance);
  perron_vector(t, result);
  return result;
}

std::pair<std::size_t, Int> rank_and_trace(const PullbackMatrix& t) {
  Int tr = 0;
  for (std::size_t i = 0; i < t.entries.size(); ++i) tr += t.entries[i][i];
  return {matrix_rank(to_q_matrix(t.entries)), tr};
}

bool krein_rutman_check(const PullbackMatrix& t, const Rational& tolerance) {
  SpectralResult result = analyze_spectrum(t, tolerance);
  UPolyZ sf = squarefree_part(char_upoly(result.char_poly));
  bool root_present;
  if (result.rho_exact) {
    root_present = eval(sf, *result.rho_exact) == 0;
  } else {
    root_present = count_roots_halfopen(sturm_chain(sf), result.rho_lo,
                                        result.rho_hi) >= 1;
  }
  return root_present && (result.cone_certified || result.indeterminate);
}

}  // namespace surfdyn
