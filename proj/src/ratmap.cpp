#include "surfdyn/ratmap.hpp"

#include <algorithm>

#include "surfdyn/errors.hpp"
#include "surfdyn/polygcd.hpp"
#include "surfdyn/upoly.hpp"

namespace surfdyn {

namespace {

struct FactorSpan {
  std::size_t begin;
  std::size_t size;
};

std::vector<FactorSpan> factor_spans(Surface s) {
  if (s == Surface::P2) return {{0, 3}};
  return {{0, 2}, {2, 2}};
}

// Validation + normalization shared by make_map and compose; composition
// reports an all-zero factor as degenerate rather than malformed.
RationalSelfMap finish_map(Surface s, std::vector<SparsePoly> comps,
                           bool from_compose) {
  const auto& vars = s == Surface::P2 ? p2_variables() : p1xp1_variables();
  const std::size_t split = s == Surface::P2 ? 0 : 2;
  const std::size_t expected = s == Surface::P2 ? 3 : 4;
  if (comps.size() != expected) {
    throw input_error(surface_name(s) + " map needs " + std::to_string(expected) +
                      " components, got " + std::to_string(comps.size()));
  }
  for (const auto& c : comps) {
    if (c.variables() != vars || c.block_split() != split) {
      throw input_error("components must use the " + surface_name(s) +
                        " variable convention");
    }
  }
  for (const auto& span : factor_spans(s)) {
    const Grading* common = nullptr;
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      if (comps[i].is_zero()) continue;
      const Grading& g = comps[i].grading();
      if (s == Surface::P2 && g.kind != GradingKind::Homogeneous) {
        throw input_error("P2 components must be homogeneous");
      }
      if (s == Surface::P1xP1 && g.kind != GradingKind::Bihomogeneous) {
        throw input_error("P1xP1 components must be bihomogeneous");
      }
      if (common == nullptr) {
        common = &g;
      } else if (!(*common == g)) {
        throw input_error("components of a factor must share a common degree");
      }
    }
    if (common == nullptr) {
      if (from_compose) {
        throw degenerate_composition_error(
            "a factor collapsed to zero under composition");
      }
      throw input_error("a factor has all components zero");
    }

    // Cancel the factor's polynomial gcd.
    SparsePoly g(vars, split);
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      g = poly_gcd(g, comps[i]);
    }
    if (!g.is_constant()) {
      for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
        if (!comps[i].is_zero()) comps[i] = exact_divide(comps[i], g);
      }
    }

    // Scale to coprime integer coefficients across the whole factor.
    Int num_gcd(0), den_lcm(1);
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      for (const auto& [e, c] : comps[i].terms()) {
        num_gcd = gcd(num_gcd, c.get_num());
        den_lcm = lcm(den_lcm, c.get_den());
      }
    }
    Rational scale = make_rational(den_lcm, num_gcd);

    // Deterministic sign: first nonzero component gets a positive lead.
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      if (comps[i].is_zero()) continue;
      if (comps[i].leading_coefficient() * scale < 0) scale = -scale;
      break;
    }
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      comps[i] = comps[i] * scale;
    }
  }
  return RationalSelfMap{s, std::move(comps)};
}

const SparsePoly& first_nonzero(const RationalSelfMap& f, std::size_t factor) {
  const auto span = factor_spans(f.surface)[factor];
  for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
    if (!f.components[i].is_zero()) return f.components[i];
  }
  throw precondition_error("factor has all components zero");
}

// Value of the top total-degree form at var_x = t, var_y = 1 (all other
// variables absent from p).
Rational top_form_at(const SparsePoly& p, std::size_t var_x, const Rational& t) {
  const std::uint64_t d = p.total_degree();
  Rational acc(0);
  for (const auto& [e, c] : p.terms()) {
    std::uint64_t td = 0;
    for (auto exp : e) td += exp;
    if (td < d) break;  // graded order: all top-degree terms come first
    acc += c * pow_rational(t, e[var_x]);
  }
  return acc;
}

}  // namespace

const std::vector<std::string>& p2_variables() {
  static const std::vector<std::string> vars{"x", "y", "z"};
  return vars;
}

const std::vector<std::string>& p1xp1_variables() {
  static const std::vector<std::string> vars{"t0", "t1", "w0", "w1"};
  return vars;
}

RationalSelfMap make_map(Surface s, std::vector<SparsePoly> components) {
  return finish_map(s, std::move(components), false);
}

RationalSelfMap identity_map(Surface s) {
  const auto& vars = s == Surface::P2 ? p2_variables() : p1xp1_variables();
  const std::size_t split = s == Surface::P2 ? 0 : 2;
  std::vector<SparsePoly> comps;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    comps.push_back(SparsePoly::variable(vars, i, split));
  }
  return make_map(s, std::move(comps));
}

RationalSelfMap power_map(std::uint32_t d) {
  if (d == 0) throw input_error("power map needs exponent d >= 1");
  const auto& vars = p1xp1_variables();
  std::vector<SparsePoly> comps;
  comps.push_back(SparsePoly::from_terms(vars, {{{d, 0, 0, 0}, Rational(1)}}, 2));
  comps.push_back(SparsePoly::from_terms(vars, {{{0, d, 0, 0}, Rational(1)}}, 2));
  comps.push_back(SparsePoly::variable(vars, 2, 2));
  comps.push_back(SparsePoly::variable(vars, 3, 2));
  return make_map(Surface::P1xP1, std::move(comps));
}

std::uint64_t algebraic_degree(const RationalSelfMap& f) {
  if (f.surface != Surface::P2) {
    throw precondition_error("algebraic_degree is defined for P2 maps");
  }
  return first_nonzero(f, 0).total_degree();
}

std::array<std::pair<std::uint64_t, std::uint64_t>, 2> factor_bidegrees(
    const RationalSelfMap& f) {
  if (f.surface != Surface::P1xP1) {
    throw precondition_error("factor_bidegrees is defined for P1xP1 maps");
  }
  std::array<std::pair<std::uint64_t, std::uint64_t>, 2> out;
  for (std::size_t k = 0; k < 2; ++k) {
    auto bd = first_nonzero(f, k).bidegree();
    if (!bd) throw precondition_error("factor is not bihomogeneous");
    out[k] = *bd;
  }
  return out;
}

std::vector<std::vector<Int>> pullback_matrix(const RationalSelfMap& f) {
  if (f.surface == Surface::P2) {
    return {{Int(algebraic_degree(f))}};
  }
  auto bd = factor_bidegrees(f);
  return {{Int(bd[0].first), Int(bd[1].first)},
          {Int(bd[0].second), Int(bd[1].second)}};
}

RationalSelfMap compose(const RationalSelfMap& f, const RationalSelfMap& g) {
  if (f.surface != g.surface) {
    throw precondition_error("cannot compose maps on different surfaces");
  }
  std::vector<SparsePoly> comps;
  comps.reserve(f.components.size());
  for (const auto& fi : f.components) {
    comps.push_back(substitute(fi, g.components));
  }
  return finish_map(f.surface, std::move(comps), true);
}

std::vector<RationalSelfMap> iterate(const RationalSelfMap& f, unsigned n,
                                     std::uint64_t max_factor_degree) {
  if (n == 0) throw precondition_error("iterate needs n >= 1");
  const auto mf = pullback_matrix(f);
  const Int budget(static_cast<unsigned long>(max_factor_degree));
  std::vector<RationalSelfMap> out{f};
  for (unsigned k = 2; k <= n; ++k) {
    // Predicted raw factor degrees of f o f^{k-1}: column sums of the matrix
    // product M_prev * M_f, since (f o g)^* = g^* o f^*.  An upper bound;
    // normalization may cancel further.
    auto pred = [&] {
      const auto prev = pullback_matrix(out.back());
      std::vector<Int> degs;
      for (std::size_t j = 0; j < prev.size(); ++j) {
        Int sum(0);
        for (std::size_t i = 0; i < prev.size(); ++i) {
          for (std::size_t l = 0; l < prev.size(); ++l) sum += prev[i][l] * mf[l][j];
        }
        degs.push_back(sum);
      }
      return degs;
    }();
    for (const auto& d : pred) {
      if (d > budget) {
        throw budget_error("iteration degree budget (" +
                               std::to_string(max_factor_degree) +
                               ") exceeded at step " + std::to_string(k),
                           static_cast<int>(k - 1));
      }
    }
    out.push_back(compose(f, out.back()));
  }
  return out;
}

bool base_points_finite(const RationalSelfMap& f) {
  for (const auto& span : factor_spans(f.surface)) {
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      for (std::size_t j = i + 1; j < span.begin + span.size; ++j) {
        if (!poly_gcd(f.components[i], f.components[j]).is_constant()) {
          return false;
        }
      }
    }
  }
  return true;
}

Int base_scheme_length_p1xp1(const RationalSelfMap& f) {
  if (f.surface != Surface::P1xP1) {
    throw precondition_error("base_scheme_length_p1xp1 needs a P1xP1 map");
  }
  if (!base_points_finite(f)) {
    throw precondition_error("base scheme is not finite (nonconstant factor gcd)");
  }
  auto bd = factor_bidegrees(f);
  Int total(0);
  for (const auto& [a, b] : bd) {
    total += 2 * Int(a) * Int(b);
  }
  return total;
}

bool chart_has_common_zero(std::vector<SparsePoly> polys, std::size_t var_x,
                           std::size_t var_y) {
  // Drop zero components; a nonzero constant already rules every point out.
  std::erase_if(polys, [](const SparsePoly& p) { return p.is_zero(); });
  if (polys.empty()) return true;
  for (const auto& p : polys) {
    if (p.is_constant()) return false;
  }
  if (polys.size() == 1) return true;  // a nonconstant plane curve has points

  // Shear var_x <- var_x + t*var_y so that every polynomial gets a constant
  // leading coefficient in var_y (of degree = its total degree).  A value of
  // t is bad only when it is a root of some top form, so the scan is finite.
  const std::size_t arity = polys[0].var_count();
  for (long t = 0;; ++t) {
    bool good = true;
    for (const auto& p : polys) {
      if (top_form_at(p, var_x, Rational(t)) == 0) {
        good = false;
        break;
      }
    }
    if (good) {
      if (t != 0) {
        QMatrix m = identity_matrix(arity);
        m[var_x][var_y] = Rational(t);
        for (auto& p : polys) p = linear_change(p, m);
      }
      break;
    }
  }

  if (polys.size() == 2) {
    // Coprime pair with constant leading y-coefficients: a common zero exists
    // iff the resultant in var_y has a root, i.e. is nonconstant.
    SparsePoly r = poly_resultant(polys[0], polys[1], var_y);
    if (r.is_zero()) return true;  // common factor: a whole curve of zeros
    return !r.is_constant();
  }

  // Three polynomials A, B, C with gcd(A, B, C) constant.  For a parameter t
  // let Phi_t = Res_y(A, B + t*C).  At any x0 (leading coefficient of A is
  // constant) Phi_t(x0) = lc^e * prod over roots y_i of A(x0,.) of
  // (B + t*C)(x0, y_i).  A triple zero above x0 makes every Phi_t vanish at
  // x0; conversely if D+1 = deg_y(A)+1 parameters all vanish at x0, some root
  // y_i kills two of them, forcing B(x0,y_i) = C(x0,y_i) = 0.  So the triple
  // has a common zero iff the gcd of D+1 admissible Phi_t is nonconstant.
  std::sort(polys.begin(), polys.end(),
            [](const SparsePoly& p, const SparsePoly& q) {
              return p.total_degree() < q.total_degree();
            });
  const SparsePoly& a = polys[0];
  const SparsePoly& b = polys[1];
  const SparsePoly& c = polys[2];
  const std::uint64_t d = a.total_degree();
  UPolyZ g;
  std::uint64_t collected = 0;
  for (std::uint64_t t = 0; t <= 2 * d + 2 && collected < d + 1; ++t) {
    SparsePoly phi = poly_resultant(a, b + Rational(static_cast<long>(t)) * c, var_y);
    if (phi.is_zero()) continue;  // B + t*C shares a factor with A: skip t
    g = gcd_z(g, primitive_z(to_upoly(phi, var_x)));
    ++collected;
    if (g.degree() == 0) return false;  // no x0 survives: early exit
  }
  if (collected < d + 1) {
    throw error("chart elimination could not find enough admissible parameters");
  }
  return g.degree() >= 1;
}

bool is_regular(const RationalSelfMap& f) {
  if (f.surface == Surface::P1xP1) {
    auto bd = factor_bidegrees(f);
    return bd[0].first * bd[0].second == 0 && bd[1].first * bd[1].second == 0;
  }
  // P2: the base locus is empty iff no affine chart contains a common zero.
  struct Chart {
    std::size_t set_to_one, var_x, var_y;
  };
  for (const Chart& chart : {Chart{2, 0, 1}, Chart{1, 0, 2}, Chart{0, 1, 2}}) {
    std::vector<SparsePoly> restricted;
    for (const auto& comp : f.components) {
      restricted.push_back(specialize(comp, chart.set_to_one, Rational(1)));
    }
    if (chart_has_common_zero(std::move(restricted), chart.var_x, chart.var_y)) {
      return false;
    }
  }
  return true;
}

bool maps_equal(const RationalSelfMap& f, const RationalSelfMap& g) {
  if (f.surface != g.surface) {
    throw precondition_error("cannot compare maps on different surfaces");
  }
  for (const auto& span : factor_spans(f.surface)) {
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      for (std::size_t j = i + 1; j < span.begin + span.size; ++j) {
        if (!(f.components[i] * g.components[j] ==
              f.components[j] * g.components[i])) {
          return false;
        }
      }
    }
  }
  return true;
}

RationalSelfMap involution_map(const MoebiusInvolution& iota) {
  if (iota.a.size() != 2 || iota.a[0].size() != 2 || iota.a[1].size() != 2) {
    throw input_error("Moebius matrix must be 2x2");
  }
  if (determinant(iota.a) == 0) throw input_error("Moebius matrix is singular");
  const auto& vars = p1xp1_variables();
  auto t0 = SparsePoly::variable(vars, 0, 2);
  auto t1 = SparsePoly::variable(vars, 1, 2);
  auto w0 = SparsePoly::variable(vars, 2, 2);
  auto w1 = SparsePoly::variable(vars, 3, 2);
  // New t-coordinates: A acting on [w0:w1]; new w-coordinates: the adjugate
  // of A (projectively A^{-1}) acting on [t0:t1].
  std::vector<SparsePoly> comps{
      iota.a[0][0] * w0 + iota.a[0][1] * w1,
      iota.a[1][0] * w0 + iota.a[1][1] * w1,
      iota.a[1][1] * t0 - iota.a[0][1] * t1,
      Rational(-1) * iota.a[1][0] * t0 + iota.a[0][0] * t1,
  };
  return make_map(Surface::P1xP1, std::move(comps));
}

RationalSelfMap twist_by_involution(const RationalSelfMap& f,
                                    const MoebiusInvolution& iota) {
  if (f.surface != Surface::P1xP1) {
    throw precondition_error("involution twists are defined on P1xP1");
  }
  return compose(f, involution_map(iota));
}

std::optional<std::vector<Rational>> evaluate_map(
    const RationalSelfMap& f, const std::vector<Rational>& point) {
  if (point.size() != f.components[0].var_count()) {
    throw precondition_error("point arity does not match the surface");
  }
  for (const auto& span : factor_spans(f.surface)) {
    // Input blocks: P2 has one (x,y,z); P1xP1 has (t0,t1) and (w0,w1).
    const std::size_t lo = f.surface == Surface::P2 ? 0 : span.begin;
    const std::size_t hi = f.surface == Surface::P2 ? 3 : span.begin + 2;
    bool any = false;
    for (std::size_t i = lo; i < hi; ++i) any = any || point[i] != 0;
    if (!any) throw precondition_error("point has an all-zero coordinate block");
  }
  std::vector<Rational> image;
  for (const auto& comp : f.components) {
    image.push_back(evaluate(comp, point));
  }
  for (const auto& span : factor_spans(f.surface)) {
    bool any = false;
    for (std::size_t i = span.begin; i < span.begin + span.size; ++i) {
      any = any || image[i] != 0;
    }
    if (!any) return std::nullopt;
  }
  return image;
}

}  // namespace surfdyn
