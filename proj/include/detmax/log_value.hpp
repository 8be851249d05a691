#pragma once

#include <cmath>
#include <compare>
#include <limits>

#include "detmax/errors.hpp"

namespace detmax {

/// Nonnegative quantity carried in the log domain so that products of up to
/// ~50 determinant factors stay representable. -infinity encodes exactly zero;
/// arithmetic never produces NaN.
class LogValue {
public:
  LogValue() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogValue zero() { return LogValue(); }
  static LogValue one() { return from_log(0.0); }

  static LogValue from_log(double log_magnitude) {
    LogValue v;
    v.log_ = log_magnitude;
    return v;
  }

  static LogValue from_value(double value) {
    if (value < 0.0) throw InvalidInput("LogValue requires a nonnegative value");
    return from_log(value == 0.0 ? -std::numeric_limits<double>::infinity()
                                 : std::log(value));
  }

  double log() const { return log_; }
  double value() const { return is_zero() ? 0.0 : std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0.0; }

  /// Multiplication in the value domain: zero is absorbing.
  LogValue operator*(LogValue other) const {
    if (is_zero() || other.is_zero()) return zero();
    return from_log(log_ + other.log_);
  }
  LogValue& operator*=(LogValue other) { return *this = *this * other; }

  /// Addition in the value domain via log-sum-exp.
  LogValue operator+(LogValue other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    double hi = std::max(log_, other.log_);
    double lo = std::min(log_, other.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  LogValue& operator+=(LogValue other) { return *this = *this + other; }

  friend auto operator<=>(LogValue a, LogValue b) {
    return a.log_ <=> b.log_;
  }
  friend bool operator==(LogValue a, LogValue b) { return a.log_ == b.log_; }

private:
  double log_;
};

} // namespace detmax
