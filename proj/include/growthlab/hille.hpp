#pragma once

// Sector structure of w'' + P(z) w = 0: the n+2 boundary angles, blow-up /
// decay classification on sector bisectors, and argument-principle zero
// counting on sector contours.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/ode.hpp"

namespace growthlab {

struct SectorSet {
  int degree = 0;
  std::vector<double> thetas;  // sorted boundary angles in [0, 2pi)

  double width() const { return kTwoPi / (degree + 2); }
  /// Sector j is (thetas[j], thetas[j] + width).
  double bisector(int j) const { return thetas.at(j) + 0.5 * width(); }
  /// Index of the sector whose closure contains angle theta.
  int sector_containing(double theta) const {
    const double t = normalize_angle_positive(theta);
    for (int j = 0; j < static_cast<int>(thetas.size()); ++j) {
      const double d = normalize_angle_positive(t - thetas[j]);
      if (d <= width()) return j;
    }
    return 0;
  }
};

inline SectorSet hille_sectors(const std::vector<cplx>& P) {
  const int n = poly_degree(P);
  if (n < 0) throw DomainError("hille_sectors: zero polynomial");
  const double arg_an = std::arg(P[n]);
  SectorSet s;
  s.degree = n;
  for (int j = 0; j < n + 2; ++j) s.thetas.push_back(normalize_angle_positive((2.0 * j * kPi - arg_an) / (n + 2)));
  std::sort(s.thetas.begin(), s.thetas.end());
  return s;
}

enum class SectorKind { BlowUp, Decay };

struct SectorVerdict {
  int j = 0;
  SectorKind kind = SectorKind::BlowUp;
  double exponent = 0;
  double fit_residual = 0;
  double wronskian = 0;  // normalized Wronskian against the subdominant solution
};

struct SectorOptions {
  double r_max = 0;  // 0 selects 40 for n <= 2 and 20 otherwise
  Controller ctrl{};
};

namespace detail {

inline double default_sector_rmax(int n) { return n <= 2 ? 40.0 : 20.0; }

/// Fit of log(y) against log r over samples with r in [lo, hi] and y > 1.
inline std::optional<LineFit> loglog_fit(const std::vector<RaySample>& samples, double lo, double hi, bool decay) {
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (s.r < lo || s.r > hi) continue;
    const double v = decay ? -s.logf : s.logf;
    if (v > 1.0) {
      x.push_back(std::log(s.r));
      y.push_back(std::log(v));
    }
  }
  if (x.size() < 5) return std::nullopt;
  return fit_line(x, y);
}

inline bool exponent_qualifies(const LineFit& fit, int n) {
  const double target = 0.5 * (n + 2);
  return fit.rms < 0.1 && std::abs(fit.slope - target) <= 0.15 * target;
}

}  // namespace detail

/// Solution of w'' + P w = 0 that decays outward along the bisector of sector
/// j, integrated inward from r_max to the origin (stable direction). The
/// starting slope is the WKB value w'/w = -q with q^2 = -P chosen to decay.
inline PathResult subdominant_solution(const std::vector<cplx>& P, const SectorSet& s, int j, double r_max, const Controller& ctrl = {}) {
  const double phi = s.bisector(j);
  const cplx z = std::polar(r_max, phi);
  cplx q = std::sqrt(-horner(P, z));
  if ((std::polar(1.0, phi) * q).real() < 0) q = -q;
  const ScaledState start = make_state(cplx(1.0, 0.0), -q, ctrl.renorm_log);
  return integrate_path(poly({0.0}), poly(P), Path::ray(phi), start, r_max, 0.0, ctrl);
}

/// Classifies the solution with w(0) = w0, w'(0) = w0p in sector j.
inline SectorVerdict classify_sector(const std::vector<cplx>& P, cplx w0, cplx w0p, int j, const SectorOptions& opt = {}) {
  const SectorSet s = hille_sectors(P);
  if (j < 0 || j >= static_cast<int>(s.thetas.size())) throw DomainError("classify_sector: sector index out of range");
  if (w0 == cplx(0.0, 0.0) && w0p == cplx(0.0, 0.0)) throw DomainError("classify_sector: trivial solution");
  const int n = s.degree;
  const double r_max = opt.r_max > 0 ? opt.r_max : detail::default_sector_rmax(n);
  const double phi = s.bisector(j);
  const EntireFunction zero = poly({0.0}), Pf = poly(P);

  SectorVerdict v;
  v.j = j;

  // Decay test: proportionality to the subdominant solution at the origin.
  const PathResult sub = subdominant_solution(P, s, j, r_max, opt.ctrl);
  const ScaledState& s0 = sub.end;
  const ScaledState w = make_state(w0, w0p, opt.ctrl.renorm_log);
  const LogComplex W = wronskian(w, s0);
  const double norm = std::max(w.log_f().logmod, w.log_fp().logmod) + std::max(s0.log_f().logmod, s0.log_fp().logmod);
  v.wronskian = W.is_zero() ? 0.0 : std::exp(W.logmod - norm);

  if (v.wronskian < 1e-6) {
    // w = c s with c = w0 / s(0); log|w| = log|c| + log|s| along the ray
    const LogComplex c = std::abs(w0) >= std::abs(w0p) ? LogComplex::from_complex(w0) / s0.log_f()
                                                       : LogComplex::from_complex(w0p) / s0.log_fp();
    std::vector<RaySample> samples;
    for (const auto& p : sub.samples) samples.push_back({p.t, p.logf + c.logmod, 0, 0, 0, 0});
    std::reverse(samples.begin(), samples.end());
    const auto fit = detail::loglog_fit(samples, r_max / 4, r_max, true);
    if (fit && detail::exponent_qualifies(*fit, n)) {
      v.kind = SectorKind::Decay;
      v.exponent = fit->slope;
      v.fit_residual = fit->rms;
      return v;
    }
  }

  const PathResult fwd = integrate_path(zero, Pf, Path::ray(phi), w, 0.0, r_max, opt.ctrl);
  std::vector<RaySample> samples;
  for (const auto& p : fwd.samples) samples.push_back({p.t, p.logf, p.argf, p.logfp, p.argfp, p.renorms});
  const auto fit = detail::loglog_fit(samples, r_max / 4, r_max, false);
  if (fit && detail::exponent_qualifies(*fit, n)) {
    v.kind = SectorKind::BlowUp;
    v.exponent = fit->slope;
    v.fit_residual = fit->rms;
    return v;
  }
  throw NumericalError("classify_sector: ambiguous classification in sector " + std::to_string(j) + " at r_max = " +
                           std::to_string(r_max) + "; increase r_max",
                       fit ? fit->slope : 0.0);
}

// ---------------------------------------------------------------------------
// Zero counting by the argument principle

struct ZeroCount {
  long count = 0;
  double raw = 0;       // total change of arg divided by 2 pi
  double distance = 0;  // |raw - count|
  double radius = 0;    // radius actually used after any perturbation
  int retries = 0;
};

namespace detail {

struct LegTrace {
  double darg = 0;       // change of arg f along the leg
  double min_ratio = 0;  // min |f / f'| on the leg
  LogComplex end_value;
};

inline LegTrace trace_leg(const PathResult& r) {
  LegTrace leg;
  leg.darg = r.samples.back().argf - r.samples.front().argf;
  leg.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& s : r.samples) leg.min_ratio = std::min(leg.min_ratio, std::exp(s.logf - s.logfp));
  leg.end_value = r.end.log_f();
  return leg;
}

/// Leg of an explicit function, sampled adaptively until consecutive
/// argument jumps are below pi/4.
inline LegTrace trace_leg(const EntireFunction& f, const Path& path, double t0, double t1) {
  struct Pt {
    double t;
    Jet j;
  };
  auto at = [&](double t) { return Pt{t, eval_jet(f, path.z(t))}; };
  std::vector<Pt> pts;
  for (int i = 0; i <= 64; ++i) pts.push_back(at(t0 + (t1 - t0) * i / 64.0));
  LegTrace leg;
  leg.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<Pt> stack{pts.rbegin(), pts.rend()};
  Pt cur = stack.back();
  stack.pop_back();
  while (!stack.empty()) {
    Pt nxt = stack.back();
    if (cur.j.value.is_zero() || nxt.j.value.is_zero()) {
      leg.min_ratio = 0.0;  // zero on the contour: let the caller perturb the radius
      return leg;
    }
    const double jump = normalize_arg(nxt.j.value.arg - cur.j.value.arg);
    if (std::abs(jump) > kPi / 4 && std::abs(nxt.t - cur.t) > 1e-12 * std::max(1.0, std::abs(cur.t))) {
      stack.push_back(at(0.5 * (cur.t + nxt.t)));
      continue;
    }
    stack.pop_back();
    leg.darg += jump;
    leg.min_ratio = std::min(leg.min_ratio, std::exp(cur.j.value.logmod - cur.j.deriv.logmod));
    cur = nxt;
  }
  leg.min_ratio = std::min(leg.min_ratio, std::exp(cur.j.value.logmod - cur.j.deriv.logmod));
  leg.end_value = cur.j.value;
  return leg;
}

inline ZeroCount finish_count(double total_darg, double R, int retries) {
  ZeroCount c;
  c.raw = total_darg / kTwoPi;
  c.count = std::lround(c.raw);
  c.distance = std::abs(c.raw - c.count);
  c.radius = R;
  c.retries = retries;
  return c;
}

/// Runs `attempt(R)` on the deterministic perturbation ladder R (1 + 0.005 k),
/// k = 0..5, until the contour stays clear of zeros.
template <class Attempt>
ZeroCount with_retries(double R, Attempt&& attempt) {
  for (int k = 0; k <= 5; ++k) {
    const double Rk = R * (1.0 + 0.005 * k);
    std::optional<ZeroCount> c = attempt(Rk, k);
    if (c) return *c;
  }
  throw NumericalError("sector_zero_count: zero near the contour after 5 radius perturbations", R);
}

}  // namespace detail

/// Zeros of an explicit entire function in {|z| <= R, |arg z - theta| <= eps};
/// eps >= pi selects the full disk.
inline ZeroCount sector_zero_count(const EntireFunction& f, double theta, double eps, double R) {
  if (!(R > 0) || !(eps > 0)) throw DomainError("sector_zero_count: need R > 0 and eps > 0");
  return detail::with_retries(R, [&](double Rk, int k) -> std::optional<ZeroCount> {
    if (eps >= kPi) {
      const auto arc = detail::trace_leg(f, Path::arc(Rk), 0.0, kTwoPi);
      if (arc.min_ratio < 1e-3 * Rk) return std::nullopt;
      return detail::finish_count(arc.darg, Rk, k);
    }
    const auto lo = detail::trace_leg(f, Path::ray(theta - eps), 0.0, Rk);
    const auto arc = detail::trace_leg(f, Path::arc(Rk), theta - eps, theta + eps);
    const auto hi = detail::trace_leg(f, Path::ray(theta + eps), 0.0, Rk);
    if (std::min({lo.min_ratio, arc.min_ratio, hi.min_ratio}) < 1e-3 * Rk) return std::nullopt;
    return detail::finish_count(lo.darg + arc.darg - hi.darg, Rk, k);
  });
}

/// Same count for the solution of f'' + A f' + B f = 0 with f(0) = f0,
/// f'(0) = f0p. Every leg is integrated outward from the origin; the arc
/// leg continues from the end of the theta - eps ray and must agree with the
/// theta + eps ray at the far corner.
inline ZeroCount sector_zero_count(const EntireFunction& A, const EntireFunction& B, cplx f0, cplx f0p, double theta, double eps,
                                   double R, const Controller& ctrl = {}) {
  if (!(R > 0) || !(eps > 0)) throw DomainError("sector_zero_count: need R > 0 and eps > 0");
  const ScaledState s0 = make_state(f0, f0p, ctrl.renorm_log);
  if (f0 == cplx(0.0, 0.0)) throw DomainError("sector_zero_count: solution vanishes at the origin");
  return detail::with_retries(R, [&](double Rk, int k) -> std::optional<ZeroCount> {
    const double a = eps >= kPi ? 0.0 : theta - eps;
    const double b = eps >= kPi ? kTwoPi : theta + eps;
    const PathResult ray_lo = integrate_path(A, B, Path::ray(a), s0, 0.0, Rk, ctrl);
    const PathResult arc = integrate_path(A, B, Path::arc(Rk), ray_lo.end, a, b, ctrl);
    const auto leg_lo = detail::trace_leg(ray_lo);
    const auto leg_arc = detail::trace_leg(arc);
    if (eps >= kPi) {
      if (leg_arc.min_ratio < 1e-3 * Rk) return std::nullopt;
      const LogComplex start = ray_lo.end.log_f(), end = arc.end.log_f();
      if (std::abs(end.logmod - start.logmod) > 1e-4 * std::max(1.0, std::abs(start.logmod)))
        throw NumericalError("sector_zero_count: closed contour does not return to its start value", end.logmod);
      return detail::finish_count(leg_arc.darg, Rk, k);
    }
    const PathResult ray_hi = integrate_path(A, B, Path::ray(b), s0, 0.0, Rk, ctrl);
    const auto leg_hi = detail::trace_leg(ray_hi);
    if (std::min({leg_lo.min_ratio, leg_arc.min_ratio, leg_hi.min_ratio}) < 1e-3 * Rk) return std::nullopt;
    const LogComplex c1 = leg_arc.end_value, c2 = leg_hi.end_value;
    const double rel = std::abs(ratio(c1, c2) - cplx(1.0, 0.0));
    if (!(rel < 1e-4)) throw NumericalError("sector_zero_count: contour legs disagree at the far corner", rel);
    return detail::finish_count(leg_lo.darg + leg_arc.darg - leg_hi.darg, Rk, k);
  });
}

}  // namespace growthlab
