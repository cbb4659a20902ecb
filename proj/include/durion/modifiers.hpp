#pragma once

#include <utility>

#include "durion/errors.hpp"
#include "durion/rational.hpp"
#include "durion/semiring.hpp"

namespace durion {

/// Reference duration for unit changes, held in symbol units: the numeral
/// of the reference note (4 = quarter). With the reference in symbol units
/// the map between the two unit systems is the single reciprocal x -> delta/x
/// in both directions.
class ReferenceDelta {
 public:
  explicit ReferenceDelta(Rational delta) : delta_(std::move(delta)) {
    if (delta_.is_zero() || delta_.is_infinite())
      throw domain_error("reference duration must be positive and finite");
  }

  static ReferenceDelta quarter() { return ReferenceDelta(Rational(4)); }

  const Rational& value() const { return delta_; }

 private:
  Rational delta_;
};

/// Reciprocal unit change, symbol units to reference units. The grace point
/// maps across: delta/inf = 0.
inline RsdValue morph(const AsdValue& x, const ReferenceDelta& delta) {
  return RsdValue(delta.value() / x.value());
}

/// Inverse direction; the same reciprocal, with 0 mapping back to the
/// symbol-unit grace point.
inline AsdValue morph_inv(const RsdValue& x, const ReferenceDelta& delta) {
  if (x.is_grace()) return AsdValue::grace();
  return AsdValue(delta.value() / x.value());
}

/// Two written notes joined into one sounding duration.
template <DurationSemiring S>
typename S::value_type tie(const typename S::value_type& a,
                           const typename S::value_type& b) {
  return S::otimes(a, b);
}

inline AsdValue tie(const AsdValue& a, const AsdValue& b) {
  return tie<AsdSemiring>(a, b);
}
inline RsdValue tie(const RsdValue& a, const RsdValue& b) {
  return tie<RsdSemiring>(a, b);
}

/// n dots, each prolonging by half the previous prolongation:
/// dot(a, 0) = a, dot(a, n+1) = repeat(a, 1/2^(n+1)) (x) dot(a, n).
/// Computed by unfolding the induction, never by closed form.
template <DurationSemiring S>
typename S::value_type dot(const typename S::value_type& a, int n) {
  if (n < 0) throw domain_error("dot count must be non-negative");
  typename S::value_type acc = a;
  for (int i = 1; i <= n; ++i)
    acc = S::otimes(S::repeat(a, Rational(BigInt(1), BigInt(1) << i)), acc);
  return acc;
}

inline AsdValue dot(const AsdValue& a, int n) { return dot<AsdSemiring>(a, n); }
inline RsdValue dot(const RsdValue& a, int n) { return dot<RsdSemiring>(a, n); }

/// gamma notes in the time of two base notes: repeat(a, 2/gamma).
template <DurationSemiring S>
typename S::value_type tuplet(const typename S::value_type& a, int gamma) {
  if (gamma < 3) throw domain_error("tuplet ratio must be at least 3");
  return S::repeat(a, Rational(BigInt(2), BigInt(gamma)));
}

inline AsdValue tuplet(const AsdValue& a, int gamma) {
  return tuplet<AsdSemiring>(a, gamma);
}
inline RsdValue tuplet(const RsdValue& a, int gamma) {
  return tuplet<RsdSemiring>(a, gamma);
}

}  // namespace durion
