#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "durion/counters.hpp"
#include "durion/errors.hpp"

namespace durion {

using BigInt = boost::multiprecision::cpp_int;

/// Exact non-negative rational with a distinguished infinity point.
///
/// Every finite value is kept in lowest terms with denominator >= 1 and zero
/// normalized to 0/1, so each value has exactly one representation and
/// equality is structural. Negative values are not representable: an
/// operation that would leave the domain throws domain_error instead of
/// wrapping, and the indeterminate forms inf - inf, 0 * inf and inf / inf
/// throw undefined_form_error. Infinity is a tagged point, not a 1/0
/// sentinel.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}

  Rational(long long value) : Rational(BigInt(value), BigInt(1)) {}

  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw domain_error("rational denominator must be nonzero");
    if (num_ < 0 || den_ < 0)
      throw domain_error("rational values are non-negative");
    reduce();
  }

  static Rational infinity() {
    Rational r;
    r.infinite_ = true;
    return r;
  }

  /// Accepts "p", "p/q" (decimal digits) and "inf". Returns nullopt on any
  /// other input, including signs, whitespace and q = 0.
  static std::optional<Rational> parse(std::string_view text) {
    if (text == "inf") return infinity();
    const auto slash = text.find('/');
    const std::string_view num_part =
        slash == std::string_view::npos ? text : text.substr(0, slash);
    const std::string_view den_part =
        slash == std::string_view::npos ? std::string_view("1")
                                        : text.substr(slash + 1);
    if (!all_digits(num_part) || !all_digits(den_part)) return std::nullopt;
    BigInt den{std::string(den_part)};
    if (den == 0) return std::nullopt;
    return Rational(BigInt(std::string(num_part)), std::move(den));
  }

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && num_ == 0; }
  bool is_integer() const { return !infinite_ && den_ == 1; }

  // Meaningless while is_infinite(); infinity is normalized to 0/1 storage.
  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  /// "p/q", "p" when q = 1, "inf" for the infinity point.
  std::string str() const {
    if (infinite_) return "inf";
    std::string out = num_.str();
    if (den_ != 1) {
      out += '/';
      out += den_.str();
    }
    return out;
  }

  /// Display-only decimal approximation; core computation never rounds.
  double approx() const {
    if (infinite_) return std::numeric_limits<double>::infinity();
    return boost::multiprecision::cpp_rational(num_, den_).convert_to<double>();
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }

  // Defined for finite operands with a >= b only.
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.infinite_ && b.infinite_) throw undefined_form_error("inf - inf");
    if (a.infinite_ || b.infinite_)
      throw domain_error("subtraction takes finite operands");
    if (a < b) throw domain_error("subtraction result would be negative");
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) {
      if (a.is_zero() || b.is_zero()) throw undefined_form_error("0 * inf");
      return infinity();
    }
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (a.infinite_ && b.infinite_) throw undefined_form_error("inf / inf");
    if (b.infinite_) return Rational();  // x / inf = 0
    if (b.is_zero()) throw domain_error("division by zero");
    if (a.infinite_) return infinity();
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  // Total order with infinity above every finite value.
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Largest rational dividing both arguments into integers:
  /// gcd(p1,p2)/lcm(q1,q2) for lowest-terms inputs, with gcd(x, 0) = x.
  /// Both arguments must be finite and not both zero.
  friend Rational gcd(const Rational& a, const Rational& b) {
    counters::rational_gcd_calls.fetch_add(1, std::memory_order_relaxed);
    if (a.infinite_ || b.infinite_)
      throw domain_error("gcd takes finite values");
    if (a.is_zero() && b.is_zero()) throw domain_error("gcd(0, 0)");
    return Rational(boost::multiprecision::gcd(a.num_, b.num_),
                    boost::multiprecision::lcm(a.den_, b.den_));
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  static bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  }

  void reduce() {
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
  bool infinite_ = false;
};

}  // namespace durion
