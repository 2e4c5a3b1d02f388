#include "surfdyn/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <cstdio>
#include <vector>

namespace surfdyn {

Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw input_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw input_error("empty rational literal");
  for (char c : text) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw input_error("bad character in rational literal: '" +
                        std::string(1, c) + "'");
  }
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    return make_rational(num, den);
  } catch (const std::invalid_argument&) {
    throw input_error("malformed rational literal: " + text);
  }
}

Rational rational_from_decimal_string(const std::string& text) {
  if (text.find('.') == std::string::npos &&
      text.find('e') == std::string::npos &&
      text.find('E') == std::string::npos) {
    return rational_from_string(text);
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
    digits += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      ++frac;
    }
  }
  long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    long sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -1;
      ++i;
    }
    std::string e;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      e += text[i++];
    if (e.empty()) throw input_error("malformed decimal literal: " + text);
    exp10 = sign * std::stol(e);
  }
  if (digits.empty() || i != text.size()) {
    throw input_error("malformed decimal literal: " + text);
  }
  Rational value{Int(digits)};
  const long shift = exp10 - frac;
  const Rational scale{pow_int(
      Int(10), static_cast<std::uint64_t>(shift < 0 ? -shift : shift))};
  if (shift < 0) {
    value /= scale;
  } else {
    value *= scale;
  }
  if (negative) value = -value;
  return value;
}

std::string to_string(const Int& z) { return z.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

int sign(const Rational& q) { return sgn(q); }

Int pow_int(const Int& base, std::uint64_t e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

Rational pow_rational(const Rational& base, std::uint64_t e) {
  return make_rational(pow_int(base.get_num(), e), pow_int(base.get_den(), e));
}

namespace {

constexpr mpfr_prec_t kPrecision = 256;

mpfr_rnd_t rnd_of(Round mode) {
  switch (mode) {
    case Round::Down:
      return MPFR_RNDD;
    case Round::Up:
      return MPFR_RNDU;
    default:
      return MPFR_RNDN;
  }
}

std::string format_mpfr(mpfr_t x, Round mode, int digits) {
  char fmt[32];
  std::snprintf(fmt, sizeof(fmt), "%%.%dR*g", digits);
  char buf[128];
  mpfr_snprintf(buf, sizeof(buf), fmt, rnd_of(mode), x);
  return std::string(buf);
}

}  // namespace

std::string decimal_string(const Rational& q, Round mode, int digits) {
  mpfr_t x;
  mpfr_init2(x, kPrecision);
  mpfr_set_q(x, q.get_mpq_t(), rnd_of(mode));
  std::string out = format_mpfr(x, mode, digits);
  mpfr_clear(x);
  return out;
}

std::string log_decimal_string(const Rational& q, Round mode, int digits) {
  if (sgn(q) <= 0) throw precondition_error("log of a non-positive rational");
  mpfr_t x;
  mpfr_init2(x, kPrecision);
  mpfr_set_q(x, q.get_mpq_t(), rnd_of(mode));
  mpfr_log(x, x, rnd_of(mode));
  std::string out = format_mpfr(x, mode, digits);
  mpfr_clear(x);
  return out;
}

std::string nth_root_decimal_string(const Rational& q, unsigned long n,
                                    Round mode, int digits) {
  if (sgn(q) <= 0) throw precondition_error("root of a non-positive rational");
  if (n == 0) throw precondition_error("0th root");
  mpfr_t x;
  mpfr_init2(x, kPrecision);
  mpfr_set_q(x, q.get_mpq_t(), rnd_of(mode));
  mpfr_rootn_ui(x, x, n, rnd_of(mode));
  std::string out = format_mpfr(x, mode, digits);
  mpfr_clear(x);
  return out;
}

}  // namespace surfdyn
