#include "surfdyn/upoly.hpp"

#include <algorithm>

namespace surfdyn {

void UPolyZ::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

void UPolyQ::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

UPolyZ primitive_z(const UPolyQ& p) {
  UPolyQ t = p;
  t.trim();
  if (t.is_zero()) return {};
  Int l(1);
  for (const auto& q : t.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  UPolyZ out;
  out.c.reserve(t.c.size());
  for (const auto& q : t.c) {
    Rational scaled = q * Rational(l);
    out.c.push_back(scaled.get_num());
  }
  return primitive_z(std::move(out));
}

UPolyZ primitive_z(UPolyZ p) {
  p.trim();
  if (p.is_zero()) return p;
  Int g(0);
  for (const auto& z : p.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
  if (sgn(p.c.back()) < 0) g = -g;
  for (auto& z : p.c) z /= g;
  return p;
}

UPolyQ to_q(const UPolyZ& p) {
  UPolyQ out;
  out.c.reserve(p.c.size());
  for (const auto& z : p.c) out.c.emplace_back(z);
  return out;
}

Rational eval(const UPolyZ& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

Rational eval(const UPolyQ& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UPolyZ derivative(const UPolyZ& p) {
  UPolyZ out;
  for (std::size_t i = 1; i < p.c.size(); ++i)
    out.c.push_back(p.c[i] * Int(static_cast<unsigned long>(i)));
  out.trim();
  return out;
}

std::pair<UPolyQ, UPolyQ> divrem(const UPolyQ& a, const UPolyQ& b) {
  UPolyQ r = a, q;
  r.trim();
  UPolyQ d = b;
  d.trim();
  if (d.is_zero()) throw precondition_error("division by the zero polynomial");
  if (r.degree() >= d.degree())
    q.c.assign(static_cast<std::size_t>(r.degree() - d.degree()) + 1, Rational(0));
  const Rational& lead = d.c.back();
  while (!r.is_zero() && r.degree() >= d.degree()) {
    std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
    Rational f = r.c.back() / lead;
    q.c[shift] = f;
    for (std::size_t i = 0; i < d.c.size(); ++i) r.c[shift + i] -= f * d.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

UPolyZ gcd_z(const UPolyZ& a, const UPolyZ& b) {
  UPolyZ p = primitive_z(a), q = primitive_z(b);
  if (p.is_zero()) return q;
  if (q.is_zero()) return p;
  if (p.degree() < q.degree()) std::swap(p, q);
  // Primitive polynomial remainder sequence.
  while (true) {
    auto [quo, rem] = divrem(to_q(p), to_q(q));
    UPolyZ r = primitive_z(rem);
    if (r.is_zero()) return q;
    if (r.degree() == 0) return UPolyZ{{Int(1)}};
    p = std::move(q);
    q = std::move(r);
  }
}

UPolyQ exact_div(const UPolyQ& a, const UPolyQ& b) {
  auto [q, r] = divrem(a, b);
  if (!r.is_zero()) throw precondition_error("polynomial division not exact");
  return q;
}

UPolyZ squarefree_part(const UPolyZ& p) {
  UPolyZ t = primitive_z(p);
  if (t.is_zero()) throw input_error("squarefree part of zero");
  if (t.degree() == 0) return UPolyZ{{Int(1)}};
  UPolyZ g = gcd_z(t, derivative(t));
  return primitive_z(primitive_z(exact_div(to_q(t), to_q(g))));
}

Rational cauchy_bound(const UPolyZ& p) {
  if (p.is_zero() || p.degree() == 0) return Rational(1);
  Rational lead(abs(p.c.back()));
  Rational m(0);
  for (std::size_t i = 0; i + 1 < p.c.size(); ++i) {
    Rational v(abs(p.c[i]));
    if (v > m) m = v;
  }
  return Rational(1) + m / lead;
}

namespace {

// Primitive scaling by a positive rational only: the sign pattern of a Sturm
// chain must survive, so unlike primitive_z this never negates.
UPolyZ primitive_keep_sign(const UPolyQ& p) {
  UPolyZ out = primitive_z(p);
  if (!p.is_zero() && sgn(p.c.back()) < 0)
    for (auto& z : out.c) z = -z;
  return out;
}

}  // namespace

std::vector<UPolyZ> sturm_chain(const UPolyZ& squarefree) {
  std::vector<UPolyZ> chain;
  UPolyZ s = primitive_z(squarefree);
  if (s.is_zero()) throw input_error("Sturm chain of zero");
  chain.push_back(s);
  UPolyZ d = derivative(s);  // positive lead since s has one
  d = primitive_z(std::move(d));
  while (!d.is_zero()) {
    chain.push_back(d);
    auto [quo, rem] = divrem(to_q(chain[chain.size() - 2]), to_q(chain.back()));
    for (auto& x : rem.c) x = -x;
    d = primitive_keep_sign(rem);
  }
  return chain;
}

namespace {

int sign_variations_at(const std::vector<UPolyZ>& chain, const Rational& x) {
  int variations = 0, prev = 0;
  for (const auto& p : chain) {
    int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++variations;
    prev = s;
  }
  return variations;
}

}  // namespace

int count_roots_halfopen(const std::vector<UPolyZ>& chain, const Rational& a,
                         const Rational& b) {
  if (a > b) throw precondition_error("count_roots: a > b");
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

namespace {

// All divisors of |n| when |n| factors quickly by trial division; nullopt if
// n is too large to enumerate comfortably.
std::optional<std::vector<Int>> small_divisors(Int n) {
  n = abs(n);
  if (n == 0) return std::vector<Int>{};
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 44) return std::nullopt;
  std::vector<Int> divs;
  Int d(1);
  for (; d * d <= n; ++d) {
    if (n % d == 0) {
      divs.push_back(d);
      if (d * d != n) divs.push_back(n / d);
    }
  }
  return divs;
}

}  // namespace

std::optional<RootInterval> largest_real_root(const UPolyZ& squarefree,
                                              const Rational& tolerance) {
  UPolyZ s = primitive_z(squarefree);
  if (s.is_zero()) throw input_error("root isolation on zero");
  if (s.degree() == 0) return std::nullopt;
  auto chain = sturm_chain(s);
  Rational bound = cauchy_bound(s);
  if (count_roots_halfopen(chain, -bound, bound) == 0) return std::nullopt;

  // Rational roots are p/q with p | trailing coefficient, q | leading.
  // Test candidates exactly when the divisor sets are enumerable.
  std::size_t k = 0;
  while (k < s.c.size() && s.c[k] == 0) ++k;  // factor out x^k: 0 is a root
  std::optional<Rational> best_rational;
  if (k > 0) best_rational = Rational(0);
  auto nums = small_divisors(s.c[k]);
  auto dens = small_divisors(s.c.back());
  if (nums && dens) {
    for (const Int& p : *nums)
      for (const Int& q : *dens) {
        Rational cand = make_rational(p, q);
        for (int sign = 0; sign < 2; ++sign, cand = -cand) {
          if (eval(s, cand) == 0 &&
              (!best_rational || cand > *best_rational))
            best_rational = cand;
        }
      }
    if (best_rational &&
        count_roots_halfopen(chain, *best_rational, bound) == 0) {
      // Nothing above the best rational root: it is the maximum.
      return RootInterval{*best_rational, *best_rational, *best_rational};
    }
  }

  // Isolate the largest root by bisection on (lo, hi].
  Rational lo = -bound, hi = bound;
  while (count_roots_halfopen(chain, lo, hi) > 1 || hi - lo > Rational(1, 2)) {
    Rational mid = (lo + hi) / 2;
    if (count_roots_halfopen(chain, mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  // A rational root of the primitive integer polynomial inside an interval
  // of width < 1 that escaped the divisor test can only appear when the
  // divisor sets were too large; retry the candidate directly.
  if (!nums || !dens) {
    // Integer candidate (covers the monic characteristic polynomials).
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
    Rational cand(fl);
    if (cand > lo && cand <= hi && eval(s, cand) == 0)
      return RootInterval{cand, cand, cand};
  }
  RootInterval iv{lo, hi, std::nullopt};
  iv = narrow(chain, iv, tolerance);
  return iv;
}

RootInterval narrow(const std::vector<UPolyZ>& chain, RootInterval iv,
                    const Rational& width) {
  if (iv.exact) return iv;
  while (iv.hi - iv.lo > width) {
    Rational mid = (iv.lo + iv.hi) / 2;
    if (count_roots_halfopen(chain, mid, iv.hi) >= 1)
      iv.lo = mid;
    else
      iv.hi = mid;
  }
  return iv;
}

}  // namespace surfdyn
