#include "surfdyn/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace surfdyn {

namespace {

std::uint64_t term_total_degree(const Exponents& e) {
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  return d;
}

std::pair<std::uint64_t, std::uint64_t> term_block_degrees(const Exponents& e,
                                                           std::size_t split) {
  std::uint64_t d1 = 0, d2 = 0;
  for (std::size_t i = 0; i < e.size(); ++i) (i < split ? d1 : d2) += e[i];
  return {d1, d2};
}

void require_compatible(const SparsePoly& p, const SparsePoly& q) {
  if (p.variables() != q.variables() || p.block_split() != q.block_split())
    throw input_error("variable-list mismatch between polynomials");
}

std::uint32_t checked_exp_add(std::uint32_t a, std::uint32_t b) {
  std::uint64_t s = std::uint64_t(a) + std::uint64_t(b);
  if (s > 0xffffffffull) throw input_error("exponent overflow");
  return static_cast<std::uint32_t>(s);
}

}  // namespace

bool GradedLexGreater::operator()(const Exponents& a,
                                  const Exponents& b) const {
  std::uint64_t da = term_total_degree(a), db = term_total_degree(b);
  if (da != db) return da > db;
  return a > b;  // lexicographic on exponent vectors, larger first
}

SparsePoly::SparsePoly(std::vector<std::string> variables,
                       std::size_t block_split)
    : vars_(std::move(variables)), split_(block_split) {
  if (split_ > vars_.size())
    throw input_error("block split exceeds variable count");
}

SparsePoly SparsePoly::constant(std::vector<std::string> variables,
                                const Rational& value,
                                std::size_t block_split) {
  SparsePoly p(std::move(variables), block_split);
  if (value != 0) p.terms_.emplace(Exponents(p.vars_.size(), 0), value);
  p.refresh_grading();
  return p;
}

SparsePoly SparsePoly::variable(std::vector<std::string> variables,
                                std::size_t index, std::size_t block_split) {
  SparsePoly p(std::move(variables), block_split);
  if (index >= p.vars_.size()) throw input_error("variable index out of range");
  Exponents e(p.vars_.size(), 0);
  e[index] = 1;
  p.terms_.emplace(std::move(e), Rational(1));
  p.refresh_grading();
  return p;
}

SparsePoly SparsePoly::from_terms(
    std::vector<std::string> variables,
    const std::vector<std::pair<Exponents, Rational>>& terms,
    std::size_t block_split) {
  SparsePoly p(std::move(variables), block_split);
  for (const auto& [e, c] : terms) {
    if (e.size() != p.vars_.size())
      throw input_error("exponent vector length mismatch");
    p.add_term(e, c);
  }
  p.refresh_grading();
  return p;
}

bool SparsePoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && term_total_degree(terms_.begin()->first) == 0;
}

Rational SparsePoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant())
    throw precondition_error("constant_value of a non-constant polynomial");
  return terms_.begin()->second;
}

std::uint64_t SparsePoly::total_degree() const {
  if (terms_.empty()) return 0;
  return term_total_degree(terms_.begin()->first);  // graded order: max first
}

std::uint64_t SparsePoly::degree_in(std::size_t var) const {
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max<std::uint64_t>(d, e[var]);
  return d;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> SparsePoly::bidegree()
    const {
  if (grading_.kind != GradingKind::Bihomogeneous) return std::nullopt;
  return std::make_pair(grading_.degree1, grading_.degree2);
}

const Exponents& SparsePoly::leading_exponents() const {
  if (terms_.empty())
    throw precondition_error("leading term of the zero polynomial");
  return terms_.begin()->first;
}

const Rational& SparsePoly::leading_coefficient() const {
  if (terms_.empty())
    throw precondition_error("leading term of the zero polynomial");
  return terms_.begin()->second;
}

void SparsePoly::add_term(const Exponents& exps, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void SparsePoly::refresh_grading() {
  grading_ = Grading{};
  if (terms_.empty()) return;
  if (split_ > 0) {
    auto [d1, d2] = term_block_degrees(terms_.begin()->first, split_);
    bool bihom = true;
    for (const auto& [e, c] : terms_) {
      auto [a, b] = term_block_degrees(e, split_);
      if (a != d1 || b != d2) {
        bihom = false;
        break;
      }
    }
    if (bihom) {
      grading_ = Grading{GradingKind::Bihomogeneous, d1 + d2, d1, d2};
      return;
    }
  }
  std::uint64_t d = term_total_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (term_total_degree(e) != d) return;  // stays ungraded
  grading_ = Grading{GradingKind::Homogeneous, d, 0, 0};
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly out(vars_, split_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  out.refresh_grading();
  return out;
}

SparsePoly operator+(const SparsePoly& p, const SparsePoly& q) {
  require_compatible(p, q);
  SparsePoly out = p;
  for (const auto& [e, c] : q.terms_) out.add_term(e, c);
  out.refresh_grading();
  return out;
}

SparsePoly operator-(const SparsePoly& p, const SparsePoly& q) {
  require_compatible(p, q);
  SparsePoly out = p;
  for (const auto& [e, c] : q.terms_) out.add_term(e, -c);
  out.refresh_grading();
  return out;
}

SparsePoly operator*(const SparsePoly& p, const SparsePoly& q) {
  require_compatible(p, q);
  SparsePoly out(p.vars_, p.split_);
  Exponents e(p.var_count());
  for (const auto& [ep, cp] : p.terms_) {
    for (const auto& [eq, cq] : q.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = checked_exp_add(ep[i], eq[i]);
      out.add_term(e, cp * cq);
    }
  }
  out.refresh_grading();
  return out;
}

SparsePoly operator*(const Rational& c, const SparsePoly& p) {
  SparsePoly out(p.vars_, p.split_);
  if (c != 0)
    for (const auto& [e, pc] : p.terms_) out.terms_.emplace(e, c * pc);
  out.refresh_grading();
  return out;
}

SparsePoly operator*(const SparsePoly& p, const Rational& c) { return c * p; }

namespace {

// Power with caching of repeated squarings per base polynomial.
SparsePoly poly_pow(const SparsePoly& base, std::uint64_t e) {
  SparsePoly acc =
      SparsePoly::constant(base.variables(), Rational(1), base.block_split());
  SparsePoly sq = base;
  while (e > 0) {
    if (e & 1) acc = acc * sq;
    e >>= 1;
    if (e > 0) sq = sq * sq;
  }
  return acc;
}

}  // namespace

SparsePoly substitute(const SparsePoly& p,
                      const std::vector<SparsePoly>& images) {
  if (images.size() != p.var_count())
    throw input_error("substitute: arity mismatch");
  for (const auto& im : images) require_compatible(images.front(), im);
  std::vector<std::string> tvars = images.empty()
                                       ? std::vector<std::string>{}
                                       : images.front().variables();
  std::size_t tsplit = images.empty() ? 0 : images.front().block_split();
  SparsePoly out(tvars, tsplit);

  // Cache powers of each image as needed.
  std::vector<std::map<std::uint64_t, SparsePoly>> powers(images.size());
  auto image_power = [&](std::size_t i, std::uint64_t e) -> const SparsePoly& {
    auto it = powers[i].find(e);
    if (it == powers[i].end())
      it = powers[i].emplace(e, poly_pow(images[i], e)).first;
    return it->second;
  };

  for (const auto& [e, c] : p.terms()) {
    SparsePoly term = SparsePoly::constant(tvars, c, tsplit);
    for (std::size_t i = 0; i < images.size(); ++i)
      if (e[i] > 0) term = term * image_power(i, e[i]);
    out = out + term;
  }
  return out;
}

Rational evaluate(const SparsePoly& p, const std::vector<Rational>& point) {
  if (point.size() != p.var_count())
    throw input_error("evaluate: arity mismatch");
  Rational sum(0);
  for (const auto& [e, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < point.size(); ++i)
      if (e[i] > 0) t *= pow_rational(point[i], e[i]);
    sum += t;
  }
  return sum;
}

SparsePoly specialize(const SparsePoly& p, std::size_t var,
                      const Rational& value) {
  if (var >= p.var_count())
    throw input_error("specialize: variable index out of range");
  SparsePoly out(p.variables(), p.block_split());
  Exponents e;
  for (const auto& [ep, c] : p.terms()) {
    e = ep;
    Rational coeff = c * pow_rational(value, e[var]);
    e[var] = 0;
    out.add_term(e, coeff);
  }
  out.refresh_grading();
  return out;
}

namespace {

SparsePoly linear_change_impl(const SparsePoly& p,
                              const std::vector<std::vector<Rational>>& m,
                              std::size_t offset, std::size_t block,
                              std::vector<SparsePoly>& images) {
  for (std::size_t i = 0; i < block; ++i) {
    if (m[i].size() != block) throw input_error("linear change: ragged matrix");
    SparsePoly form(p.variables(), p.block_split());
    for (std::size_t j = 0; j < block; ++j) {
      if (m[i][j] == 0) continue;
      Exponents e(p.var_count(), 0);
      e[offset + j] = 1;
      form.add_term(e, m[i][j]);
    }
    form.refresh_grading();
    images[offset + i] = std::move(form);
  }
  return SparsePoly();
}

// Determinant over the rationals, for invertibility validation.
bool is_invertible(std::vector<std::vector<Rational>> a) {
  std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(a[piv], a[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return true;
}

}  // namespace

SparsePoly linear_change(const SparsePoly& p,
                         const std::vector<std::vector<Rational>>& m) {
  if (m.size() != p.var_count())
    throw input_error("linear change: matrix size must match variable count");
  if (!is_invertible(m)) throw input_error("linear change: singular matrix");
  std::vector<SparsePoly> images(p.var_count());
  linear_change_impl(p, m, 0, p.var_count(), images);
  return substitute(p, images);
}

SparsePoly linear_change_blocks(const SparsePoly& p,
                                const std::vector<std::vector<Rational>>& m1,
                                const std::vector<std::vector<Rational>>& m2) {
  std::size_t split = p.block_split();
  if (split == 0) throw input_error("blockwise linear change needs a split");
  if (m1.size() != split || m2.size() != p.var_count() - split)
    throw input_error("linear change: block size mismatch");
  if (!is_invertible(m1) || !is_invertible(m2))
    throw input_error("linear change: singular matrix");
  std::vector<SparsePoly> images(p.var_count());
  linear_change_impl(p, m1, 0, split, images);
  linear_change_impl(p, m2, split, p.var_count() - split, images);
  return substitute(p, images);
}

SparsePoly derivative(const SparsePoly& p, std::size_t var) {
  if (var >= p.var_count())
    throw input_error("derivative: variable index out of range");
  SparsePoly out(p.variables(), p.block_split());
  Exponents e;
  for (const auto& [ep, c] : p.terms()) {
    if (ep[var] == 0) continue;
    e = ep;
    Rational coeff = c * Rational(e[var]);
    e[var] -= 1;
    out.add_term(e, coeff);
  }
  out.refresh_grading();
  return out;
}

std::string render(const SparsePoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    Rational mag = abs(c);
    bool negative = sgn(c) < 0;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    std::vector<std::string> factors;
    bool is_const_term = term_total_degree(e) == 0;
    // A leading "-x^2" would re-parse as (-x)^2; keep the coefficient
    // explicit there.  Otherwise magnitude-1 coefficients are omitted.
    if (is_const_term || mag != 1 || (first && negative))
      factors.push_back(to_string(mag));
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (e[i] == 1)
        factors.push_back(p.variables()[i]);
      else
        factors.push_back(p.variables()[i] + "^" + std::to_string(e[i]));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out << "*";
      out << factors[i];
    }
    first = false;
  }
  return out.str();
}

}  // namespace surfdyn
