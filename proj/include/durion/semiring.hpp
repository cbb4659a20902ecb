#pragma once

#include <concepts>
#include <string>
#include <utility>

#include "durion/errors.hpp"
#include "durion/rational.hpp"

namespace durion {

/// Duration in symbol units: the numeral a notehead implies (quarter = 4,
/// eighth = 8). Larger numeral, shorter note. The domain is strictly
/// positive rationals plus infinity; infinity is the grace note (null
/// duration). Zero is not a value of this unit.
class AsdValue {
 public:
  explicit AsdValue(Rational v) : v_(std::move(v)) {
    if (v_.is_zero()) throw domain_error("symbol-unit duration must be positive");
  }

  static AsdValue grace() { return AsdValue(Rational::infinity()); }

  const Rational& value() const { return v_; }
  bool is_grace() const { return v_.is_infinite(); }
  std::string str() const { return v_.str(); }

  friend bool operator==(const AsdValue&, const AsdValue&) = default;

 private:
  Rational v_;
};

/// Duration in reference units: length as a multiple of a reference note
/// (quarter lengths when the reference is a quarter). The domain is finite
/// non-negative rationals; zero is the grace note.
class RsdValue {
 public:
  explicit RsdValue(Rational v) : v_(std::move(v)) {
    if (v_.is_infinite())
      throw domain_error("reference-unit duration must be finite");
  }

  static RsdValue grace() { return RsdValue(Rational()); }

  const Rational& value() const { return v_; }
  bool is_grace() const { return v_.is_zero(); }
  std::string str() const { return v_.str(); }

  friend bool operator==(const RsdValue&, const RsdValue&) = default;

 private:
  Rational v_;
};

/// Symbol-unit semiring: oplus selects the longest duration (numeric min),
/// otimes concatenates (harmonic combination: 8 (+) 8 = 4). Both identities
/// are the grace point. The neutral element is not absorbing for otimes;
/// no law here claims it is.
struct AsdSemiring {
  using value_type = AsdValue;
  static constexpr const char* unit_name = "asd";

  static AsdValue oplus(const AsdValue& a, const AsdValue& b) {
    return a.value() <= b.value() ? a : b;
  }

  static AsdValue otimes(const AsdValue& a, const AsdValue& b) {
    if (a.is_grace()) return b;
    if (b.is_grace()) return a;
    return AsdValue(a.value() * b.value() / (a.value() + b.value()));
  }

  static AsdValue oplus_identity() { return AsdValue::grace(); }
  static AsdValue otimes_neutral() { return AsdValue::grace(); }

  // n-fold concatenation generalized to rational n: the numeral divides.
  static AsdValue repeat(const AsdValue& a, const Rational& n) {
    if (n.is_infinite() || n.is_zero())
      throw domain_error("repeat scalar must be positive and finite");
    return AsdValue(a.value() / n);
  }

  // Strictly shorter sounding duration: the larger numeral.
  static bool duration_lt(const AsdValue& a, const AsdValue& b) {
    return a.value() > b.value();
  }
};

/// Reference-unit semiring: oplus selects the longest duration (numeric
/// max), otimes concatenates (addition). Both identities are 0, which is
/// likewise not absorbing for otimes.
struct RsdSemiring {
  using value_type = RsdValue;
  static constexpr const char* unit_name = "rsd";

  static RsdValue oplus(const RsdValue& a, const RsdValue& b) {
    return a.value() >= b.value() ? a : b;
  }

  static RsdValue otimes(const RsdValue& a, const RsdValue& b) {
    return RsdValue(a.value() + b.value());
  }

  static RsdValue oplus_identity() { return RsdValue::grace(); }
  static RsdValue otimes_neutral() { return RsdValue::grace(); }

  static RsdValue repeat(const RsdValue& a, const Rational& n) {
    if (n.is_infinite() || n.is_zero())
      throw domain_error("repeat scalar must be positive and finite");
    return RsdValue(a.value() * n);
  }

  static bool duration_lt(const RsdValue& a, const RsdValue& b) {
    return a.value() < b.value();
  }
};

template <class S>
concept DurationSemiring =
    requires(const typename S::value_type& a, const typename S::value_type& b,
             const Rational& n) {
      { S::oplus(a, b) } -> std::same_as<typename S::value_type>;
      { S::otimes(a, b) } -> std::same_as<typename S::value_type>;
      { S::oplus_identity() } -> std::same_as<typename S::value_type>;
      { S::otimes_neutral() } -> std::same_as<typename S::value_type>;
      { S::repeat(a, n) } -> std::same_as<typename S::value_type>;
      { S::duration_lt(a, b) } -> std::same_as<bool>;
    };

inline AsdValue asd_oplus(const AsdValue& a, const AsdValue& b) {
  return AsdSemiring::oplus(a, b);
}
inline AsdValue asd_otimes(const AsdValue& a, const AsdValue& b) {
  return AsdSemiring::otimes(a, b);
}
inline AsdValue asd_repeat(const AsdValue& a, const Rational& n) {
  return AsdSemiring::repeat(a, n);
}
inline RsdValue rsd_oplus(const RsdValue& a, const RsdValue& b) {
  return RsdSemiring::oplus(a, b);
}
inline RsdValue rsd_otimes(const RsdValue& a, const RsdValue& b) {
  return RsdSemiring::otimes(a, b);
}
inline RsdValue rsd_repeat(const RsdValue& a, const Rational& n) {
  return RsdSemiring::repeat(a, n);
}

/// Order induced by the idempotent oplus: x precedes y when x absorbs y,
/// i.e. x (+) y = x. In both semirings this reads "x lasts at least as long
/// as y" and is total. Distinct from duration_lt, which orders by sounding
/// length in the opposite sense; callers pick by name.
template <DurationSemiring S>
bool natural_leq(const typename S::value_type& x,
                 const typename S::value_type& y) {
  return S::oplus(x, y) == x;
}

inline bool natural_leq(const AsdValue& x, const AsdValue& y) {
  return natural_leq<AsdSemiring>(x, y);
}
inline bool natural_leq(const RsdValue& x, const RsdValue& y) {
  return natural_leq<RsdSemiring>(x, y);
}

/// True when a sounds strictly shorter than b.
inline bool duration_lt(const AsdValue& a, const AsdValue& b) {
  return AsdSemiring::duration_lt(a, b);
}
inline bool duration_lt(const RsdValue& a, const RsdValue& b) {
  return RsdSemiring::duration_lt(a, b);
}

}  // namespace durion
