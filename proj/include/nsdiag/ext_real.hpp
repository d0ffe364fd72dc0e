#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "nsdiag/errors.hpp"

namespace nsdiag {

/// A real number extended by +inf and -inf. NaN is never representable.
///
/// Addition of +inf and -inf is undefined and raises DomainError instead of
/// silently producing NaN.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw DomainError("ExtReal: NaN is not an extended real");
  }

  static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
  static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }
  double value() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
      throw DomainError("ExtReal: +inf + -inf is undefined");
    return ExtReal(a.v_ + b.v_);
  }
  friend ExtReal operator-(ExtReal a) { return ExtReal(-a.v_); }
  friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

  /// Scaling by a strictly positive finite factor; keeps infinities.
  friend ExtReal operator*(double s, ExtReal a) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("ExtReal: scale must be positive and finite");
    return ExtReal(s * a.v_);
  }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

  std::string to_string() const;

 private:
  double v_ = 0.0;
};

inline ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

}  // namespace nsdiag
