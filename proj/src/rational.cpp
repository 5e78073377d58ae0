#include "coflow/rational.hpp"

#include <limits>
#include <stdexcept>

namespace coflow {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  Integer v(std::string(s), 10);
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (!frac.empty() && !all_digits(frac)) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    Integer w = whole.empty() ? Integer(0) : parse_integer(whole);
    Integer scale = 1;
    Integer f = 0;
    if (!frac.empty()) {
      f = Integer(std::string(frac), 10);
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    }
    Rational r(w * scale + f, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::string to_decimal(const Rational& value, int digits) {
  Integer scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(value) * scale;
  Integer q = floor_of(scaled);
  Integer whole = q / scale;
  Integer rem = q % scale;
  std::string frac = rem.get_str();
  while (static_cast<int>(frac.size()) < digits) frac.insert(frac.begin(), '0');
  std::string out = (value < 0 ? "-" : "") + whole.get_str();
  if (digits > 0) out += "." + frac;
  return out;
}

Integer floor_of(const Rational& value) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& value) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

bool is_integral(const Rational& value) { return value.get_den() == 1; }

std::int64_t to_int64(const Integer& value) {
  if (!value.fits_slong_p()) throw std::overflow_error("integer exceeds int64 range");
  return static_cast<std::int64_t>(value.get_si());
}

Rational sqrt_truncated(const Rational& value, unsigned bits) {
  if (value < 0 || value > 1) throw std::invalid_argument("sqrt_truncated expects a value in [0,1]");
  // floor(sqrt(v) * 2^bits) = floor(sqrt(floor(v * 2^(2 bits))))
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, 2 * bits);
  Integer scaled = floor_of(value * scale);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Integer denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, bits);
  Rational r(root, denom);
  r.canonicalize();
  return r;
}

}  // namespace coflow
