#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace qoe {

// A finite real or +infinity. Divergences return +inf on support violations;
// finite values never carry NaN.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by intent

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.inf_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return inf_; }
  constexpr bool is_finite() const { return !inf_; }

  // Finite value; +inf maps to the IEEE infinity.
  constexpr double value() const {
    return inf_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }

  friend constexpr ExtendedReal operator*(double s, ExtendedReal a) {
    if (a.inf_) return infinity();
    return ExtendedReal(s * a.value_);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal a) {
    return a.inf_ ? os << "inf" : os << a.value_;
  }

 private:
  double value_ = 0.0;
  bool inf_ = false;
};

// a - b with the convention inf - finite = inf. Subtracting an infinite
// term is indeterminate and yields nullopt.
constexpr std::optional<ExtendedReal> difference(ExtendedReal a, ExtendedReal b) {
  if (b.is_infinite()) return std::nullopt;
  if (a.is_infinite()) return ExtendedReal::infinity();
  return ExtendedReal(a.value() - b.value());
}

// a <= b + slack, infinity-aware (inf <= inf holds).
constexpr bool leq(ExtendedReal a, ExtendedReal b, double slack = 0.0) {
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  return a.value() <= b.value() + slack;
}

}  // namespace qoe
