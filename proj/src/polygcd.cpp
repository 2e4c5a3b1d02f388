#include "surfdyn/polygcd.hpp"

#include <algorithm>
#include <optional>

namespace surfdyn {

namespace {

std::vector<std::size_t> support(const SparsePoly& p) {
  std::vector<bool> seen(p.var_count(), false);
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) seen[i] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> joint_support(const SparsePoly& p,
                                       const SparsePoly& q) {
  auto a = support(p), b = support(q);
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

SparsePoly monomial(const SparsePoly& shape, const Exponents& e,
                    const Rational& c) {
  SparsePoly out(shape.variables(), shape.block_split());
  out.add_term(e, c);
  out.refresh_grading();
  return out;
}

// Divides out each variable's minimal exponent; mins receives the removed
// monomial.  The result has, for every variable, some term of exponent 0.
SparsePoly strip_monomial(const SparsePoly& p, Exponents& mins) {
  mins.assign(p.var_count(), 0);
  if (p.is_zero()) return p;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (first) {
      mins = e;
      first = false;
    } else {
      for (std::size_t i = 0; i < e.size(); ++i)
        mins[i] = std::min(mins[i], e[i]);
    }
  }
  bool any = false;
  for (auto m : mins) any = any || m > 0;
  if (!any) return p;
  SparsePoly out(p.variables(), p.block_split());
  Exponents r;
  for (const auto& [e, c] : p.terms()) {
    r = e;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= mins[i];
    out.add_term(r, c);
  }
  out.refresh_grading();
  return out;
}

std::uint64_t block_degree(const Exponents& e, std::size_t lo, std::size_t hi) {
  std::uint64_t d = 0;
  for (std::size_t i = lo; i < hi; ++i) d += e[i];
  return d;
}

constexpr std::size_t kNoVar = static_cast<std::size_t>(-1);

// Inverse of setting one variable per block to 1: raise each term's block
// degree to the block maximum by adding powers of the chosen variables.
SparsePoly rehomogenize(const SparsePoly& g, std::size_t split, std::size_t v1,
                        std::size_t v2) {
  if (g.is_zero() || g.is_constant()) return g;
  std::size_t n = g.var_count();
  std::size_t lo2 = split == 0 ? 0 : split;
  std::uint64_t d1 = 0, d2 = 0;
  for (const auto& [e, c] : g.terms()) {
    if (split > 0) d1 = std::max(d1, block_degree(e, 0, split));
    d2 = std::max(d2, block_degree(e, lo2, n));
  }
  SparsePoly out(g.variables(), g.block_split());
  Exponents r;
  for (const auto& [e, c] : g.terms()) {
    r = e;
    if (split > 0 && v1 != kNoVar)
      r[v1] += static_cast<std::uint32_t>(d1 - block_degree(e, 0, split));
    if (v2 != kNoVar)
      r[v2] += static_cast<std::uint32_t>(d2 - block_degree(e, lo2, n));
    out.add_term(r, c);
  }
  out.refresh_grading();
  return out;
}

std::optional<SparsePoly> exact_divide_opt(const SparsePoly& p,
                                           const SparsePoly& d) {
  if (d.is_zero()) return std::nullopt;
  SparsePoly q(p.variables(), p.block_split());
  SparsePoly r = p;
  const Exponents& ed = d.leading_exponents();
  const Rational& cd = d.leading_coefficient();
  while (!r.is_zero()) {
    const Exponents& er = r.leading_exponents();
    Exponents diff(er.size());
    for (std::size_t i = 0; i < er.size(); ++i) {
      if (er[i] < ed[i]) return std::nullopt;
      diff[i] = er[i] - ed[i];
    }
    SparsePoly t = monomial(p, diff, r.leading_coefficient() / cd);
    q = q + t;
    r = r - t * d;
  }
  q.refresh_grading();
  return q;
}

}  // namespace

Rational rational_content(const SparsePoly& p) {
  if (p.is_zero()) throw precondition_error("content of zero");
  Int num(0), den(1);
  for (const auto& [e, c] : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
  }
  return make_rational(num, den);
}

SparsePoly make_primitive(const SparsePoly& p) {
  if (p.is_zero()) return p;
  Rational c = rational_content(p);
  if (sgn(p.leading_coefficient()) < 0) c = -c;
  return p * (Rational(1) / c);
}

UPolyQ to_upoly(const SparsePoly& p, std::size_t var) {
  UPolyQ out;
  out.c.assign(static_cast<std::size_t>(p.degree_in(var)) + 1, Rational(0));
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != var && e[i] != 0)
        throw precondition_error("polynomial is not univariate in the variable");
    out.c[e[var]] = c;
  }
  out.trim();
  return out;
}

SparsePoly from_upoly(const UPolyZ& u, const SparsePoly& shape,
                      std::size_t var) {
  SparsePoly out(shape.variables(), shape.block_split());
  Exponents e(shape.var_count(), 0);
  for (std::size_t k = 0; k < u.c.size(); ++k) {
    if (u.c[k] == 0) continue;
    e[var] = static_cast<std::uint32_t>(k);
    out.add_term(e, Rational(u.c[k]));
  }
  out.refresh_grading();
  return out;
}

namespace {

// Coefficient of var^k, as a polynomial over the same variable list.
SparsePoly coefficient_in(const SparsePoly& p, std::size_t var,
                          std::uint32_t k) {
  SparsePoly out(p.variables(), p.block_split());
  Exponents e;
  for (const auto& [ep, c] : p.terms()) {
    if (ep[var] != k) continue;
    e = ep;
    e[var] = 0;
    out.add_term(e, c);
  }
  out.refresh_grading();
  return out;
}

std::vector<SparsePoly> coefficients_in(const SparsePoly& p, std::size_t var) {
  std::vector<SparsePoly> out;
  auto d = static_cast<std::uint32_t>(p.degree_in(var));
  out.reserve(d + 1);
  for (std::uint32_t k = 0; k <= d; ++k) out.push_back(coefficient_in(p, var, k));
  return out;
}

SparsePoly assemble(const std::vector<SparsePoly>& coeffs,
                    const SparsePoly& shape, std::size_t var) {
  SparsePoly out(shape.variables(), shape.block_split());
  for (std::uint32_t k = 0; k < coeffs.size(); ++k) {
    Exponents e;
    for (const auto& [ep, c] : coeffs[k].terms()) {
      e = ep;
      e[var] = k;
      out.add_term(e, c);
    }
  }
  out.refresh_grading();
  return out;
}

int deg_of(const std::vector<SparsePoly>& coeffs) {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (!coeffs[k].is_zero()) return k;
  return -1;
}

void trim_coeffs(std::vector<SparsePoly>& coeffs) {
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
}

// Pseudo-remainder of a by b in the main variable, both given as coefficient
// vectors over the remaining variables.
std::vector<SparsePoly> pseudo_rem(std::vector<SparsePoly> r,
                                   const std::vector<SparsePoly>& b) {
  trim_coeffs(r);
  const SparsePoly& lb = b.back();
  int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
    SparsePoly lr = r.back();
    std::size_t shift = r.size() - b.size();
    for (auto& ri : r) ri = lb * ri;
    for (std::size_t i = 0; i < b.size(); ++i)
      r[shift + i] = r[shift + i] - lr * b[i];
    trim_coeffs(r);
  }
  return r;
}

// Content of a coefficient vector: gcd of all coefficient polynomials.
SparsePoly vector_content(const std::vector<SparsePoly>& coeffs) {
  SparsePoly g;
  bool started = false;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = started ? poly_gcd(g, c) : make_primitive(c);
    started = true;
    if (g.is_constant()) break;
  }
  return g;
}

void divide_through(std::vector<SparsePoly>& coeffs, const SparsePoly& d) {
  for (auto& c : coeffs)
    if (!c.is_zero()) c = exact_divide(c, d);
}

// Sound fast path: specialize every variable except `var` at a point where
// neither leading coefficient vanishes.  If the specialized univariate gcd is
// constant, the true gcd has degree 0 in var (since lc_var(g) divides
// lc_var(p), it cannot vanish at the point, so deg_var g survives
// specialization).
bool gcd_free_of_var(const SparsePoly& p, const SparsePoly& q, std::size_t var,
                     const std::vector<std::size_t>& others) {
  SparsePoly lp = coefficient_in(p, var, static_cast<std::uint32_t>(p.degree_in(var)));
  SparsePoly lq = coefficient_in(q, var, static_cast<std::uint32_t>(q.degree_in(var)));
  for (int attempt = 0; attempt < 6; ++attempt) {
    SparsePoly sp = p, sq = q, slp = lp, slq = lq;
    for (std::size_t j = 0; j < others.size(); ++j) {
      Rational v(static_cast<long>(1 + attempt + j * (attempt + 2)));
      sp = specialize(sp, others[j], v);
      sq = specialize(sq, others[j], v);
      slp = specialize(slp, others[j], v);
      slq = specialize(slq, others[j], v);
    }
    if (slp.is_zero() || slq.is_zero()) continue;
    UPolyZ g = gcd_z(primitive_z(to_upoly(sp, var)), primitive_z(to_upoly(sq, var)));
    if (g.degree() == 0) return true;
    return false;  // the specialized gcd is a certificate only when constant
  }
  return false;
}

// ---- Bivariate gcd by evaluation and interpolation. ----
//
// Write p = sum_j A_j(x) y^j.  At integer points xi where neither leading
// coefficient vanishes, gcd(p(xi,y), q(xi,y)) is a multiple of g(xi,y); for
// all but finitely many xi it equals it up to scale.  Scaling each image so
// its leading coefficient is gamma(xi) = gcd(lc p, lc q)(xi) makes the images
// consistent, so Newton interpolation through enough points of minimal image
// degree recovers gamma/lc(g) * g; an exact division check certifies the
// result and rejects unlucky point sets.

Int eval_z(const UPolyZ& p, const Int& x) {
  Int acc = 0;
  for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i];
  return acc;
}

// Coefficient vectors in y, entries univariate integer polynomials in x.
// Requires integer coefficients (apply make_primitive first).
std::vector<UPolyZ> to_bivariate(const SparsePoly& p, std::size_t vx,
                                 std::size_t vy) {
  std::vector<UPolyZ> out(static_cast<std::size_t>(p.degree_in(vy)) + 1);
  for (const auto& [e, c] : p.terms()) {
    if (c.get_den() != 1)
      throw error("bivariate gcd: expected integer coefficients");
    auto& u = out[e[vy]];
    std::size_t k = e[vx];
    if (u.c.size() <= k) u.c.resize(k + 1, Int(0));
    u.c[k] += c.get_num();
  }
  for (auto& u : out) u.trim();
  return out;
}

UPolyZ coeff_content(const std::vector<UPolyZ>& a) {
  UPolyZ g;
  for (const auto& u : a)
    if (!u.is_zero()) g = gcd_z(g, u);
  return g;
}

Int int_content(const UPolyZ& u) {
  Int g = 0;
  for (const auto& z : u.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
  return g;
}

// gcd in Z[x] keeping the integer part: content times primitive gcd.  Needed
// where a divisor's leading coefficient must divide the result exactly.
UPolyZ gcd_z_full(const UPolyZ& a, const UPolyZ& b) {
  UPolyZ g = gcd_z(a, b);
  Int c;
  mpz_gcd(c.get_mpz_t(), int_content(a).get_mpz_t(),
          int_content(b).get_mpz_t());
  for (auto& z : g.c) z *= c;
  return g;
}

UPolyZ exact_div_z(const UPolyZ& a, const UPolyZ& b) {
  auto [quo, rem] = divrem(to_q(a), to_q(b));
  if (!rem.is_zero()) throw error("bivariate gcd: inexact content division");
  UPolyZ out;
  out.c.reserve(quo.c.size());
  for (const auto& r : quo.c) {
    if (r.get_den() != 1) throw error("bivariate gcd: fractional quotient");
    out.c.push_back(r.get_num());
  }
  out.trim();
  return out;
}

SparsePoly assemble_bivariate(const std::vector<UPolyZ>& coeffs,
                              const SparsePoly& shape, std::size_t vx,
                              std::size_t vy) {
  SparsePoly out(shape.variables(), shape.block_split());
  Exponents e(shape.var_count(), 0);
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (std::size_t k = 0; k < coeffs[j].c.size(); ++k) {
      if (coeffs[j].c[k] == 0) continue;
      e[vx] = static_cast<std::uint32_t>(k);
      e[vy] = static_cast<std::uint32_t>(j);
      out.add_term(e, Rational(coeffs[j].c[k]));
    }
  out.refresh_grading();
  return out;
}

std::optional<SparsePoly> bivariate_gcd(const SparsePoly& p0,
                                        const SparsePoly& q0, std::size_t vx,
                                        std::size_t vy) {
  // Put the smaller maximal degree in y so images are short.
  if (std::max(p0.degree_in(vx), q0.degree_in(vx)) <
      std::max(p0.degree_in(vy), q0.degree_in(vy)))
    std::swap(vx, vy);

  SparsePoly p = make_primitive(p0), q = make_primitive(q0);
  std::vector<UPolyZ> a = to_bivariate(p, vx, vy);
  std::vector<UPolyZ> b = to_bivariate(q, vx, vy);
  UPolyZ ca = coeff_content(a), cb = coeff_content(b);
  UPolyZ cont_gcd = gcd_z(ca, cb);
  SparsePoly cont_sparse = from_upoly(cont_gcd, p, vx);
  if (a.size() == 1 || b.size() == 1)  // one input free of y
    return make_primitive(cont_sparse);
  for (auto& u : a)
    if (!u.is_zero()) u = exact_div_z(u, ca);
  for (auto& u : b)
    if (!u.is_zero()) u = exact_div_z(u, cb);

  const UPolyZ gamma = gcd_z_full(a.back(), b.back());
  std::uint64_t dxa = 0, dxb = 0;
  for (const auto& u : a) dxa = std::max<std::uint64_t>(dxa, u.c.size());
  for (const auto& u : b) dxb = std::max<std::uint64_t>(dxb, u.c.size());
  std::size_t want = static_cast<std::size_t>(gamma.degree()) +
                     static_cast<std::size_t>(std::min(dxa, dxb));  // bound+1

  struct Image {
    Int xi;
    std::vector<Int> h;  // scaled so the leading entry is gamma(xi)
  };
  std::vector<Image> images;
  int dstar = -1;  // image degree currently interpolated; -1 = none yet

  const long cap = 16 * static_cast<long>(want) + 512;
  for (long trial = 0; trial <= cap; ++trial) {
    Int xi = (trial % 2 == 0) ? Int(trial / 2) : Int(-(trial / 2 + 1));
    if (eval_z(a.back(), xi) == 0 || eval_z(b.back(), xi) == 0) continue;
    UPolyZ pa, pb;
    pa.c.reserve(a.size());
    for (const auto& u : a) pa.c.push_back(eval_z(u, xi));
    pb.c.reserve(b.size());
    for (const auto& u : b) pb.c.push_back(eval_z(u, xi));
    pa.trim();
    pb.trim();
    UPolyZ h = gcd_z(pa, pb);
    if (h.degree() == 0)  // coprime specialization: primitive parts coprime
      return make_primitive(cont_sparse);
    if (dstar >= 0 && h.degree() > dstar) continue;  // unlucky point
    if (dstar < 0 || h.degree() < dstar) {
      images.clear();
      dstar = h.degree();
    }
    Int gxi = eval_z(gamma, xi);
    if (gxi % h.c.back() != 0) continue;  // scale not integral: unlucky
    Int s = gxi / h.c.back();
    Image im{xi, {}};
    im.h.reserve(h.c.size());
    for (const auto& cc : h.c) im.h.push_back(cc * s);
    images.push_back(std::move(im));
    if (images.size() < want) continue;

    // Newton interpolation of each y-coefficient through all images.
    std::size_t n = images.size();
    std::vector<UPolyQ> basis(n);  // prod_{i<k} (x - xi_i)
    basis[0].c = {Rational(1)};
    for (std::size_t k = 1; k < n; ++k) {
      basis[k].c.assign(k + 1, Rational(0));
      const Rational root(images[k - 1].xi);
      for (std::size_t i = 0; i < k; ++i) {
        basis[k].c[i + 1] += basis[k - 1].c[i];
        basis[k].c[i] -= root * basis[k - 1].c[i];
      }
    }
    std::vector<UPolyZ> cand(static_cast<std::size_t>(dstar) + 1);
    bool integral = true;
    for (std::size_t j = 0; j <= static_cast<std::size_t>(dstar) && integral;
         ++j) {
      std::vector<Rational> dd(n);
      for (std::size_t k = 0; k < n; ++k) dd[k] = Rational(images[k].h[j]);
      for (std::size_t lvl = 1; lvl < n; ++lvl)
        for (std::size_t i = n; i-- > lvl;)
          dd[i] = (dd[i] - dd[i - 1]) /
                  Rational(images[i].xi - images[i - lvl].xi);
      UPolyQ cj;
      for (std::size_t k = 0; k < n; ++k) {
        if (dd[k] == 0) continue;
        if (cj.c.size() < basis[k].c.size()) cj.c.resize(basis[k].c.size());
        for (std::size_t i = 0; i < basis[k].c.size(); ++i)
          cj.c[i] += dd[k] * basis[k].c[i];
      }
      cj.trim();
      for (const auto& r : cj.c)
        if (r.get_den() != 1) integral = false;
      if (integral) {
        cand[j].c.reserve(cj.c.size());
        for (const auto& r : cj.c) cand[j].c.push_back(r.get_num());
        cand[j].trim();
      }
    }
    if (integral) {
      UPolyZ cc = coeff_content(cand);
      for (auto& u : cand)
        if (!u.is_zero()) u = exact_div_z(u, cc);
      SparsePoly ghat = assemble_bivariate(cand, p, vx, vy);
      if (exact_divide_opt(p, ghat) && exact_divide_opt(q, ghat))
        return make_primitive(ghat * cont_sparse);
    }
    ++want;  // unlucky point set: demand one more image and retry
  }
  return std::nullopt;  // give up; caller falls back to the remainder sequence
}

}  // namespace

SparsePoly poly_gcd(const SparsePoly& p, const SparsePoly& q) {
  if (p.variables() != q.variables() || p.block_split() != q.block_split())
    throw input_error("gcd: variable-list mismatch");
  if (p.is_zero()) return make_primitive(q);
  if (q.is_zero()) return make_primitive(p);

  auto vars = joint_support(p, q);
  if (vars.empty())
    return SparsePoly::constant(p.variables(), Rational(1), p.block_split());

  if (vars.size() == 1) {
    std::size_t v = vars[0];
    UPolyZ g = gcd_z(primitive_z(to_upoly(p, v)), primitive_z(to_upoly(q, v)));
    return from_upoly(g, p, v);
  }

  // Graded reduction.  Strip each input's monomial content (the gcd picks up
  // the elementwise-min monomial), and if both stripped inputs are graded,
  // set one supported variable per grading block to 1, recurse, and restore
  // the grading.  Since no variable divides a stripped input, dehomogenizing
  // and rehomogenizing are inverse on its divisors, so the reduction is
  // exact; it typically removes one variable per block.
  {
    Exponents mp, mq;
    SparsePoly ps = strip_monomial(p, mp);
    SparsePoly qs = strip_monomial(q, mq);
    Exponents common(mp.size(), 0);
    bool stripped_common = false;
    for (std::size_t i = 0; i < mp.size(); ++i) {
      common[i] = std::min(mp[i], mq[i]);
      stripped_common = stripped_common || common[i] > 0;
    }
    bool stripped_any = stripped_common;
    for (std::size_t i = 0; i < mp.size() && !stripped_any; ++i)
      stripped_any = mp[i] > 0 || mq[i] > 0;

    GradingKind kind = ps.grading().kind;
    bool graded =
        kind != GradingKind::Ungraded && kind == qs.grading().kind;
    if (graded || stripped_any) {
      SparsePoly g = SparsePoly::constant(p.variables(), Rational(1),
                                          p.block_split());
      if (ps.is_constant() || qs.is_constant()) {
        // gcd of the stripped parts is 1.
      } else if (graded) {
        std::size_t split = p.block_split();
        auto svars = joint_support(ps, qs);
        std::size_t v1 = kNoVar, v2 = kNoVar;
        for (auto v : svars)
          (split > 0 && v < split ? v1 : v2) = v;  // svars ascending: keep max
        SparsePoly dp = ps, dq = qs;
        if (v1 != kNoVar) {
          dp = specialize(dp, v1, Rational(1));
          dq = specialize(dq, v1, Rational(1));
        }
        if (v2 != kNoVar) {
          dp = specialize(dp, v2, Rational(1));
          dq = specialize(dq, v2, Rational(1));
        }
        g = rehomogenize(poly_gcd(dp, dq), split, v1, v2);
      } else {
        g = poly_gcd(ps, qs);
      }
      if (stripped_common) {
        SparsePoly mono = SparsePoly::from_terms(
            p.variables(), {{common, Rational(1)}}, p.block_split());
        g = g * mono;
      }
      return make_primitive(g);
    }
  }

  if (vars.size() == 2)
    if (auto g = bivariate_gcd(p, q, vars[0], vars[1])) return *g;

  // Main variable: smallest maximal degree, to keep the PRS short.
  std::size_t var = vars[0];
  std::uint64_t best = ~0ull;
  for (auto v : vars) {
    std::uint64_t d = std::max(p.degree_in(v), q.degree_in(v));
    if (d > 0 && d < best) {
      best = d;
      var = v;
    }
  }
  std::vector<std::size_t> others;
  for (auto v : vars)
    if (v != var) others.push_back(v);

  auto cp = coefficients_in(p, var);
  auto cq = coefficients_in(q, var);
  SparsePoly cont_p = vector_content(cp);
  SparsePoly cont_q = vector_content(cq);
  SparsePoly cont_gcd = poly_gcd(cont_p, cont_q);

  if (p.degree_in(var) == 0 || q.degree_in(var) == 0)
    return make_primitive(cont_gcd);

  if (gcd_free_of_var(p, q, var, others)) return make_primitive(cont_gcd);

  divide_through(cp, cont_p);
  divide_through(cq, cont_q);
  if (deg_of(cp) < deg_of(cq)) std::swap(cp, cq);

  // Primitive polynomial remainder sequence in the main variable.
  while (true) {
    auto r = pseudo_rem(cp, cq);
    if (deg_of(r) < 0) break;
    if (deg_of(r) == 0) {
      // Primitive parts are coprime in var.
      return make_primitive(cont_gcd);
    }
    SparsePoly c = vector_content(r);
    divide_through(r, c);
    cp = std::move(cq);
    cq = std::move(r);
  }
  SparsePoly pp = assemble(cq, p, var);
  return make_primitive(cont_gcd * make_primitive(pp));
}

SparsePoly exact_divide(const SparsePoly& p, const SparsePoly& d) {
  auto q = exact_divide_opt(p, d);
  if (!q) throw precondition_error("polynomial division not exact");
  return *q;
}

bool divides(const SparsePoly& d, const SparsePoly& p) {
  if (p.is_zero()) return !d.is_zero();
  return exact_divide_opt(p, d).has_value();
}

SparsePoly poly_squarefree(const SparsePoly& p, std::size_t var) {
  if (p.is_zero()) throw input_error("squarefree part of zero");
  UPolyZ u = primitive_z(to_upoly(p, var));  // checks univariateness
  return from_upoly(squarefree_part(u), p, var);
}

namespace {

// Determinant by fraction-free (Bareiss) elimination over polynomial
// entries; division by the previous pivot is exact at every step.
SparsePoly bareiss_det(std::vector<std::vector<SparsePoly>> m,
                       const SparsePoly& shape) {
  std::size_t n = m.size();
  SparsePoly one = SparsePoly::constant(shape.variables(), Rational(1),
                                        shape.block_split());
  if (n == 0) return one;
  int sign = 1;
  SparsePoly prev = one;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return SparsePoly(shape.variables(), shape.block_split());
      std::swap(m[r], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_divide(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      m[i][k] = SparsePoly(shape.variables(), shape.block_split());
    }
    prev = m[k][k];
  }
  return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Dense rational determinant for the all-constant case.
Rational gauss_det(std::vector<std::vector<Rational>> a) {
  std::size_t n = a.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

}  // namespace

SparsePoly poly_resultant(const SparsePoly& p, const SparsePoly& q,
                          std::size_t var) {
  if (p.variables() != q.variables() || p.block_split() != q.block_split())
    throw input_error("resultant: variable-list mismatch");
  if (p.is_zero() && q.is_zero())
    throw input_error("resultant of two zero polynomials");
  if (p.is_zero() || q.is_zero())
    return SparsePoly(p.variables(), p.block_split());
  auto m = static_cast<std::uint32_t>(p.degree_in(var));
  auto n = static_cast<std::uint32_t>(q.degree_in(var));
  if (m == 0 && n == 0)
    return SparsePoly::constant(p.variables(), Rational(1), p.block_split());
  if (m == 0) {
    SparsePoly acc = SparsePoly::constant(p.variables(), Rational(1),
                                          p.block_split());
    for (std::uint32_t i = 0; i < n; ++i) acc = acc * p;
    return acc;
  }
  if (n == 0) {
    SparsePoly acc = SparsePoly::constant(p.variables(), Rational(1),
                                          p.block_split());
    for (std::uint32_t i = 0; i < m; ++i) acc = acc * q;
    return acc;
  }

  auto cp = coefficients_in(p, var);
  auto cq = coefficients_in(q, var);
  std::size_t size = m + n;

  // Fast path: purely univariate resultant via a rational determinant.
  bool constant_entries = true;
  for (const auto& c : cp)
    if (!c.is_constant()) constant_entries = false;
  for (const auto& c : cq)
    if (!c.is_constant()) constant_entries = false;
  if (constant_entries) {
    std::vector<std::vector<Rational>> s(size,
                                         std::vector<Rational>(size, Rational(0)));
    for (std::uint32_t row = 0; row < n; ++row)
      for (std::uint32_t k = 0; k <= m; ++k)
        s[row][row + k] = cp[m - k].constant_value();
    for (std::uint32_t row = 0; row < m; ++row)
      for (std::uint32_t k = 0; k <= n; ++k)
        s[n + row][row + k] = cq[n - k].constant_value();
    return SparsePoly::constant(p.variables(), gauss_det(std::move(s)),
                                p.block_split());
  }

  SparsePoly zero(p.variables(), p.block_split());
  std::vector<std::vector<SparsePoly>> s(size,
                                         std::vector<SparsePoly>(size, zero));
  for (std::uint32_t row = 0; row < n; ++row)
    for (std::uint32_t k = 0; k <= m; ++k) s[row][row + k] = cp[m - k];
  for (std::uint32_t row = 0; row < m; ++row)
    for (std::uint32_t k = 0; k <= n; ++k) s[n + row][row + k] = cq[n - k];
  return bareiss_det(std::move(s), p);
}

}  // namespace surfdyn
