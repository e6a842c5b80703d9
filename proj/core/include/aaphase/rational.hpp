#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace aaphase {

using BigInt = boost::multiprecision::cpp_int;

/// Exact signed rational number kept in lowest terms with a positive
/// denominator. Zero is always stored as 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt numerator, BigInt denominator);

  /// Parses the canonical text form "p/q" or "p". Surrounding whitespace is
  /// ignored; a non-canonical input such as "4/6" is accepted and reduced.
  static Rational parse(std::string_view text);

  [[nodiscard]] const BigInt& numerator() const noexcept { return num_; }
  [[nodiscard]] const BigInt& denominator() const noexcept { return den_; }

  [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }
  [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }
  [[nodiscard]] int sign() const noexcept { return num_.sign(); }

  /// Largest integer not greater than the value.
  [[nodiscard]] BigInt floor() const;
  /// Smallest integer not less than the value.
  [[nodiscard]] BigInt ceil() const;
  /// Fractional part in [0, 1).
  [[nodiscard]] Rational frac() const;

  [[nodiscard]] Rational abs() const;
  [[nodiscard]] Rational reciprocal() const;
  [[nodiscard]] double to_double() const;

  /// "p/q", with "/q" omitted when q == 1 and the sign on the numerator.
  [[nodiscard]] std::string str() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& value) { return Rational(-value.num_, value.den_, canonical_tag{}); }

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

  friend std::ostream& operator<<(std::ostream& os, const Rational& value);

 private:
  struct canonical_tag {};
  Rational(BigInt numerator, BigInt denominator, canonical_tag)
      : num_(std::move(numerator)), den_(std::move(denominator)) {}

  void normalize();

  BigInt num_;
  BigInt den_;
};

/// Finite, deduplicated, insertion-ordered collection of nonzero rationals.
class RationalSet {
 public:
  RationalSet() = default;
  explicit RationalSet(const std::vector<Rational>& elements);
  RationalSet(std::initializer_list<Rational> elements);

  /// Returns false (and leaves the set unchanged) when the value is already present.
  bool insert(const Rational& value);

  [[nodiscard]] bool empty() const noexcept { return elements_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] const std::vector<Rational>& elements() const noexcept { return elements_; }
  [[nodiscard]] auto begin() const noexcept { return elements_.begin(); }
  [[nodiscard]] auto end() const noexcept { return elements_.end(); }

 private:
  std::vector<Rational> elements_;
};

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);

/// Smallest positive rational L such that L/|x| is a positive integer for every
/// x in the set: LCM of the reduced absolute numerators over the GCD of the
/// denominators. Throws Errc::empty_spacing_set on an empty set.
Rational lcm_rationals(const RationalSet& set);

/// Always true: any two rationals are commensurable. Real-valued inputs are
/// screened for commensurability when they are converted by rationalize().
bool are_commensurable(const RationalSet& set) noexcept;

/// Continued-fraction convergent p/q of x with q <= max_denominator and
/// |x - p/q| <= tolerance (the one with the smallest denominator). The
/// convergents are generated exactly from the binary value of x. Throws
/// Errc::incommensurable_input when no convergent qualifies.
Rational rationalize(double x, std::uint64_t max_denominator, double tolerance);

/// All continued-fraction convergents of the exact binary value of x whose
/// denominator does not exceed max_denominator, in order.
std::vector<Rational> convergents(double x, std::uint64_t max_denominator);

}  // namespace aaphase
