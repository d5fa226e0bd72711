#pragma once

// Overflow-safe complex values stored as (log-modulus, argument).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>

namespace growthlab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Wraps an angle into (-pi, pi].
inline double normalize_arg(double a) {
  if (!std::isfinite(a)) return 0.0;
  if (a > -kPi && a <= kPi) return a;
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Wraps an angle into [0, 2pi).
inline double normalize_angle_positive(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

/// A complex number w represented by log|w| and arg w.
/// The zero value is logmod = -inf, arg = 0.
struct LogComplex {
  double logmod = kNegInf;
  double arg = 0.0;

  static LogComplex zero() { return {}; }
  static LogComplex one() { return {0.0, 0.0}; }

  static LogComplex from_polar_log(double logmod, double arg) {
    if (logmod == kNegInf) return zero();
    return {logmod, normalize_arg(arg)};
  }

  static LogComplex from_complex(cplx w) {
    if (w == cplx(0.0, 0.0)) return zero();
    // hypot-based log avoids overflow of |w|^2
    return {std::log(std::abs(w)), std::arg(w)};
  }

  /// Interprets w as a complex logarithm: returns exp(w).
  static LogComplex exp_of(cplx w) { return from_polar_log(w.real(), w.imag()); }

  bool is_zero() const { return logmod == kNegInf; }

  /// exp(logmod + i arg); overflows to inf beyond logmod ~ 709.
  cplx to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(logmod), arg);
  }

  /// Value divided by exp(shift); lets callers compare terms of very different size.
  cplx scaled(double shift) const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(logmod - shift), arg);
  }

  /// Value multiplied by exp(shift).
  LogComplex shifted(double shift) const {
    if (is_zero()) return *this;
    return {logmod + shift, arg};
  }

  LogComplex operator-() const {
    if (is_zero()) return *this;
    return {logmod, normalize_arg(arg + kPi)};
  }
};

inline LogComplex operator*(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero() || b.is_zero()) return LogComplex::zero();
  return LogComplex::from_polar_log(a.logmod + b.logmod, a.arg + b.arg);
}

inline LogComplex operator/(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero()) return LogComplex::zero();
  return LogComplex::from_polar_log(a.logmod - b.logmod, a.arg - b.arg);
}

inline LogComplex operator*(const LogComplex& a, cplx c) {
  return a * LogComplex::from_complex(c);
}

/// Complex log-sum-exp: factor out the largest modulus, add the residuals in
/// ordinary arithmetic and re-log.
inline LogComplex log_sum(std::span<const LogComplex> terms) {
  double m = kNegInf;
  for (const auto& t : terms) m = std::max(m, t.logmod);
  if (m == kNegInf) return LogComplex::zero();
  if (!std::isfinite(m)) return {m, 0.0};
  cplx s{0.0, 0.0};
  double mass = 0.0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    const double w = std::exp(t.logmod - m);
    // exact values on the real axis so that x + (-x) cancels to zero
    if (t.arg == 0.0)
      s += w;
    else if (t.arg == kPi)
      s -= w;
    else
      s += std::polar(w, t.arg);
    mass += w;
  }
  // a sum below the rounding level of its terms carries no information
  if (std::abs(s) <= 8.0 * std::numeric_limits<double>::epsilon() * mass) return LogComplex::zero();
  return {m + std::log(std::abs(s)), std::arg(s)};
}

inline LogComplex operator+(const LogComplex& a, const LogComplex& b) {
  const LogComplex t[2] = {a, b};
  return log_sum(t);
}

inline LogComplex operator-(const LogComplex& a, const LogComplex& b) { return a + (-b); }

/// Ratio a/b as an ordinary complex number; callers must know it is representable.
inline cplx ratio(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(a.logmod - b.logmod), a.arg - b.arg);
}

/// log(1 + e^t) without overflow.
inline double softplus(double t) {
  if (t > 35.0) return t + std::exp(-t);
  if (t < -35.0) return std::exp(t);
  return std::log1p(std::exp(t));
}

}  // namespace growthlab
