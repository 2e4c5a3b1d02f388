#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surfdyn/rational.hpp"

namespace surfdyn {

// One exponent per variable, in variable-list order.
using Exponents = std::vector<std::uint32_t>;

enum class GradingKind { Ungraded, Homogeneous, Bihomogeneous };

struct Grading {
  GradingKind kind = GradingKind::Ungraded;
  std::uint64_t degree = 0;                // Homogeneous
  std::uint64_t degree1 = 0, degree2 = 0;  // Bihomogeneous, per block
  friend bool operator==(const Grading&, const Grading&) = default;
};

// Graded lexicographic order, largest first: higher total degree wins, ties
// broken lexicographically with the earlier variable's exponent dominant.
struct GradedLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial over the rationals.  A polynomial carries
// its ordered variable-name list and, optionally, a split of that list into
// two blocks (block_split = size of the first block) used to track
// bihomogeneity.  All arithmetic requires identical variable lists and
// splits.  Values are immutable after construction.
class SparsePoly {
 public:
  using TermMap = std::map<Exponents, Rational, GradedLexGreater>;

  SparsePoly() = default;  // zero polynomial over an empty variable list
  explicit SparsePoly(std::vector<std::string> variables,
                      std::size_t block_split = 0);

  static SparsePoly constant(std::vector<std::string> variables,
                             const Rational& value,
                             std::size_t block_split = 0);
  static SparsePoly variable(std::vector<std::string> variables,
                             std::size_t index, std::size_t block_split = 0);
  static SparsePoly from_terms(
      std::vector<std::string> variables,
      const std::vector<std::pair<Exponents, Rational>>& terms,
      std::size_t block_split = 0);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t var_count() const { return vars_.size(); }
  std::size_t block_split() const { return split_; }
  const TermMap& terms() const { return terms_; }
  const Grading& grading() const { return grading_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Value of a constant polynomial (0 for the zero polynomial).
  Rational constant_value() const;

  std::uint64_t total_degree() const;  // 0 for the zero polynomial
  std::uint64_t degree_in(std::size_t var) const;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> bidegree() const;

  // Leading data under the graded-lex order; require a nonzero polynomial.
  const Exponents& leading_exponents() const;
  const Rational& leading_coefficient() const;

  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

  SparsePoly operator-() const;
  friend SparsePoly operator+(const SparsePoly& p, const SparsePoly& q);
  friend SparsePoly operator-(const SparsePoly& p, const SparsePoly& q);
  friend SparsePoly operator*(const SparsePoly& p, const SparsePoly& q);
  friend SparsePoly operator*(const Rational& c, const SparsePoly& p);
  friend SparsePoly operator*(const SparsePoly& p, const Rational& c);

  // Internal builder: merges a term, dropping a zero result.
  void add_term(const Exponents& exps, const Rational& coeff);
  // Recomputes the grading tag by scanning terms; builders call this once.
  void refresh_grading();

 private:
  std::vector<std::string> vars_;
  std::size_t split_ = 0;
  TermMap terms_;
  Grading grading_;
};

// p with each variable replaced by images[i]; the images share one common
// variable list (and split), which becomes the result's list.
SparsePoly substitute(const SparsePoly& p, const std::vector<SparsePoly>& images);

// Exact evaluation at a rational point.
Rational evaluate(const SparsePoly& p, const std::vector<Rational>& point);

// Partial evaluation of one variable; the variable list is unchanged (the
// specialized variable simply no longer occurs).
SparsePoly specialize(const SparsePoly& p, std::size_t var,
                      const Rational& value);

// Substitution of variables by matrix-defined linear forms:
// x_i <- sum_j m[i][j] x_j.  The matrix must be square of size var_count
// and invertible.
SparsePoly linear_change(const SparsePoly& p,
                         const std::vector<std::vector<Rational>>& m);
// Blockwise variant for split polynomials: m1 acts on block 1, m2 on block 2.
SparsePoly linear_change_blocks(const SparsePoly& p,
                                const std::vector<std::vector<Rational>>& m1,
                                const std::vector<std::vector<Rational>>& m2);

// Derivative with respect to one variable.
SparsePoly derivative(const SparsePoly& p, std::size_t var);

// Canonical textual form: terms in graded-lex order, " + "/" - " separators,
// '*' products, '^' powers.  Guaranteed to re-parse to an equal polynomial
// under the mapio grammar (in particular a leading negative term is written
// with an explicit numeric coefficient, since "-x^2" would re-parse as
// (-x)^2).
std::string render(const SparsePoly& p);

}  // namespace surfdyn
