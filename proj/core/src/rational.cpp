#include "aaphase/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "aaphase/error.hpp"

namespace aaphase {

namespace {

bool parse_integer(std::string_view text, BigInt& out) {
  if (text.empty()) return false;
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) return false;
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = negative ? BigInt(-value) : value;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Exact value of a finite double as a rational.
Rational exact_binary_value(double x) {
  if (!std::isfinite(x)) throw Error(Errc::invalid_argument, "non-finite value cannot be rationalized");
  if (x == 0.0) return Rational{};
  int exponent = 0;
  const double fraction = std::frexp(x, &exponent);  // x = fraction * 2^exponent
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
  exponent -= 53;
  BigInt num = mantissa;
  BigInt den = 1;
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return {num, den};
}

}  // namespace

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw Error(Errc::invalid_argument, "rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  const BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  BigInt num;
  BigInt den = 1;
  if (slash == std::string_view::npos) {
    if (!parse_integer(s, num)) throw Error(Errc::parse_error, "malformed rational '" + std::string(text) + "'");
  } else {
    if (!parse_integer(trim(s.substr(0, slash)), num) || !parse_integer(trim(s.substr(slash + 1)), den)) {
      throw Error(Errc::parse_error, "malformed rational '" + std::string(text) + "'");
    }
    if (den.is_zero()) throw Error(Errc::parse_error, "rational with zero denominator '" + std::string(text) + "'");
  }
  return {num, den};
}

BigInt Rational::floor() const {
  BigInt q = num_ / den_;
  if (num_.sign() < 0 && q * den_ != num_) q -= 1;
  return q;
}

BigInt Rational::ceil() const {
  BigInt q = num_ / den_;
  if (num_.sign() > 0 && q * den_ != num_) q += 1;
  return q;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

Rational Rational::abs() const { return num_.sign() < 0 ? -*this : *this; }

Rational Rational::reciprocal() const {
  if (num_.is_zero()) throw Error(Errc::invalid_argument, "reciprocal of zero");
  return {den_, num_};
}

double Rational::to_double() const {
  constexpr int kExactBits = std::numeric_limits<double>::digits;
  if (boost::multiprecision::msb(den_) < kExactBits &&
      (num_.is_zero() || boost::multiprecision::msb(boost::multiprecision::abs(num_)) < kExactBits)) {
    return num_.convert_to<double>() / den_.convert_to<double>();
  }
  return boost::multiprecision::cpp_rational(num_, den_).convert_to<double>();
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rational& Rational::operator+=(const Rational& rhs) {
  num_ = num_ * rhs.den_ + rhs.num_ * den_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  num_ = num_ * rhs.den_ - rhs.num_ * den_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  num_ *= rhs.num_;
  den_ *= rhs.den_;
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_.is_zero()) throw Error(Errc::invalid_argument, "division by zero rational");
  num_ *= rhs.den_;
  den_ *= rhs.num_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
  const BigInt l = lhs.num_ * rhs.den_;
  const BigInt r = rhs.num_ * lhs.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

RationalSet::RationalSet(const std::vector<Rational>& elements) {
  for (const auto& e : elements) insert(e);
}

RationalSet::RationalSet(std::initializer_list<Rational> elements) {
  for (const auto& e : elements) insert(e);
}

bool RationalSet::insert(const Rational& value) {
  if (value.is_zero()) throw Error(Errc::invalid_argument, "RationalSet elements must be nonzero");
  for (const auto& e : elements_) {
    if (e == value) return false;
  }
  elements_.push_back(value);
  return true;
}

BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

Rational lcm_rationals(const RationalSet& set) {
  if (set.empty()) throw Error(Errc::empty_spacing_set, "empty spacing set");
  BigInt num_lcm = 1;
  BigInt den_gcd = 0;
  for (const auto& x : set) {
    num_lcm = lcm(num_lcm, boost::multiprecision::abs(x.numerator()));
    den_gcd = gcd(den_gcd, x.denominator());
  }
  return {num_lcm, den_gcd};
}

bool are_commensurable(const RationalSet& /*set*/) noexcept { return true; }

std::vector<Rational> convergents(double x, std::uint64_t max_denominator) {
  if (max_denominator < 1) throw Error(Errc::invalid_argument, "max_denominator must be >= 1");
  const Rational exact = exact_binary_value(x);
  const BigInt limit = max_denominator;

  std::vector<Rational> out;
  BigInt a = exact.numerator();
  BigInt b = exact.denominator();
  BigInt h_prev = 1, h_prev2 = 0;
  BigInt k_prev = 0, k_prev2 = 1;
  while (!b.is_zero()) {
    BigInt term = a / b;
    BigInt rem = a - term * b;
    if (rem.sign() < 0) {  // floor division for negative inputs
      term -= 1;
      rem += b;
    }
    BigInt h = term * h_prev + h_prev2;
    BigInt k = term * k_prev + k_prev2;
    if (k > limit) break;
    out.emplace_back(h, k);
    h_prev2 = std::exchange(h_prev, std::move(h));
    k_prev2 = std::exchange(k_prev, std::move(k));
    a = std::exchange(b, std::move(rem));
  }
  return out;
}

Rational rationalize(double x, std::uint64_t max_denominator, double tolerance) {
  if (!(tolerance >= 0.0)) throw Error(Errc::invalid_argument, "rationalize tolerance must be >= 0");
  for (const auto& candidate : convergents(x, max_denominator)) {
    if (std::fabs(x - candidate.to_double()) <= tolerance) return candidate;
  }
  throw Error(Errc::incommensurable_input, "incommensurable input");
}

}  // namespace aaphase
