#include "momcert/rational.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "momcert/errors.hpp"

namespace momcert {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegreeExceeded: return "DegreeExceeded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NegativePower: return "NegativePower";
    case ErrorKind::GrowthDiverging: return "GrowthDiverging";
    case ErrorKind::RankUnstable: return "RankUnstable";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::Validation: return "Validation";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorKind::Validation,
              "malformed rational '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) bad(whole);
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) bad(text);
    Integer den(std::string(den_text), 10);
    if (den == 0) bad(text);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal with optional exponent.
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    Integer ev = parse_integer(exp_text, text);
    if (!ev.fits_slong_p()) bad(text);
    exponent = ev.get_si();
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad(text);
    if (!int_part.empty() && !all_digits(int_part)) bad(text);
    if (!frac_part.empty() && !all_digits(frac_part)) bad(text);
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) bad(text);
    digits = std::string(s);
  }
  if (digits.empty()) bad(text);
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

namespace {

constexpr mp_bitcnt_t kWorkingBits = 192;

// Nearest double; mpf_get_d truncates.
double nearest_double(const mpf_class& x) {
  const double t = mpf_get_d(x.get_mpf_t());
  if (!std::isfinite(t)) return t;
  const double other = std::nextafter(t, sgn(x) >= 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(other)) return t;
  mpf_class a(t, kWorkingBits), b(other, kWorkingBits);
  a -= x;
  b -= x;
  return ::abs(b) < ::abs(a) ? other : t;
}

double log_abs_integer(const Integer& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::numbers::ln2;
}

}  // namespace

double log_abs(const Rational& value) {
  return log_abs_integer(value.get_num()) - log_abs_integer(value.get_den());
}

double to_double(const Rational& value) {
  if (sgn(value) == 0) return 0.0;
  return nearest_double(mpf_class(value, kWorkingBits));
}

// Floating estimate, Newton steps at 192 bits, then correct rounding.
double nth_root(const Rational& value, unsigned long k) {
  if (sgn(value) == 0) return 0.0;
  if (k == 1) return to_double(value);
  const double guess = std::exp(log_abs(value) / static_cast<double>(k));
  if (!std::isfinite(guess) || guess == 0.0) return guess;
  const mpf_class x(abs(value), kWorkingBits);
  mpf_class y(guess, kWorkingBits), yk1(0, kWorkingBits), step(0, kWorkingBits);
  for (int it = 0; it < 6; ++it) {
    mpf_pow_ui(yk1.get_mpf_t(), y.get_mpf_t(), k - 1);
    step = (yk1 * y - x) / (yk1 * k);
    y -= step;
  }
  return nearest_double(y);
}

Rational dyadic(double x, int bits) {
  Integer num;
  double scaled = std::ldexp(x, bits);
  mpz_set_d(num.get_mpz_t(), std::nearbyint(scaled));
  Integer den = 1;
  den <<= bits;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  return r;
}

Rational abs(const Rational& value) { return sgn(value) < 0 ? Rational(-value) : value; }

}  // namespace momcert
