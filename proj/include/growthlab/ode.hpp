#pragma once

// Integration of f'' + A(z) f' + B(z) f = 0 along paths in the complex plane.
//
// The state (f, f') is carried in scaled form: true value = scaled * e^{shift}.
// Whenever max(|f|, |f'|) leaves [e^{-L}, e^{L}] the state is multiplied by a
// power of two close to e^{-/+L}, so rescaling never introduces rounding.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/entire_function.hpp"
#include "growthlab/numerics.hpp"

namespace growthlab {

struct Controller {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  double max_step = std::numeric_limits<double>::infinity();
  double renorm_log = 200.0;      // L: renormalize outside [e^-L, e^L]
  double max_arg_step = kPi / 2;  // largest accepted change of arg f or arg f' per step
  std::size_t max_steps = 4'000'000;
};

/// Parametrized path z(t) for t between two parameter values.
struct Path {
  enum class Kind { Ray, Arc, Segment };
  Kind kind = Kind::Ray;
  double theta = 0.0;   // Ray: z = t e^{i theta}
  double radius = 0.0;  // Arc: z = radius e^{i t}
  cplx a, b;            // Segment: z = a + t (b - a), t in [0, 1]

  static Path ray(double theta) { return {Kind::Ray, theta, 0.0, {}, {}}; }
  static Path arc(double radius) { return {Kind::Arc, 0.0, radius, {}, {}}; }
  static Path segment(cplx a, cplx b) { return {Kind::Segment, 0.0, 0.0, a, b}; }

  cplx z(double t) const {
    switch (kind) {
      case Kind::Ray: return std::polar(t, theta);
      case Kind::Arc: return std::polar(radius, t);
      default: return a + t * (b - a);
    }
  }
  cplx dz(double t) const {
    switch (kind) {
      case Kind::Ray: return std::polar(1.0, theta);
      case Kind::Arc: return cplx(0.0, 1.0) * std::polar(radius, t);
      default: return b - a;
    }
  }
};

struct ScaledState {
  cplx f, fp;
  long renorms = 0;
  double unit = 0.0;  // log of the power-of-two scale per renormalization

  double shift() const { return static_cast<double>(renorms) * unit; }
  LogComplex log_f() const { return LogComplex::from_complex(f).shifted(shift()); }
  LogComplex log_fp() const { return LogComplex::from_complex(fp).shifted(shift()); }
};

struct PathSample {
  double t = 0;
  cplx z;
  double logf = 0, argf = 0, logfp = 0, argfp = 0;  // args unwrapped along the path
  long renorms = 0;
};

struct PathResult {
  std::vector<PathSample> samples;
  ScaledState end;
  std::size_t steps = 0;
};

namespace detail {

/// Coefficient value as an ordinary complex number.
inline cplx coefficient_value(const EntireFunction& f, cplx z) {
  if (const auto* p = std::get_if<PolyNode>(&f.node().v)) return horner(p->coeffs, z);
  const LogComplex v = eval_log(f, z);
  if (v.logmod > 709.0)
    throw NumericalError("coefficient overflow at z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")", std::abs(z));
  return v.to_complex();
}

inline double safe_log_abs(cplx w) { return w == cplx(0.0, 0.0) ? kNegInf : std::log(std::abs(w)); }

inline int renorm_exponent(double L) { return std::max(1, static_cast<int>(std::lround(L / std::numbers::ln2))); }

inline void renormalize(ScaledState& s, double L) {
  const int k = renorm_exponent(L);
  for (int guard = 0; guard < 4096; ++guard) {
    const double m = std::max(std::abs(s.f), std::abs(s.fp));
    if (m > std::exp(L)) {
      s.f = std::ldexp(s.f.real(), -k) + cplx(0.0, std::ldexp(s.f.imag(), -k));
      s.fp = std::ldexp(s.fp.real(), -k) + cplx(0.0, std::ldexp(s.fp.imag(), -k));
      ++s.renorms;
    } else if (m > 0 && m < std::exp(-L)) {
      s.f = std::ldexp(s.f.real(), k) + cplx(0.0, std::ldexp(s.f.imag(), k));
      s.fp = std::ldexp(s.fp.real(), k) + cplx(0.0, std::ldexp(s.fp.imag(), k));
      --s.renorms;
    } else {
      return;
    }
  }
}

}  // namespace detail

/// Scaled state for initial values given in log form.
inline ScaledState make_state(const LogComplex& f0, const LogComplex& fp0, double renorm_log = 200.0) {
  if (f0.is_zero() && fp0.is_zero()) throw DomainError("initial conditions must not both vanish");
  ScaledState s;
  s.unit = detail::renorm_exponent(renorm_log) * std::numbers::ln2;
  const double top = std::max(f0.logmod, fp0.logmod);
  s.renorms = static_cast<long>(std::floor(top / s.unit));
  s.f = f0.scaled(s.shift());
  s.fp = fp0.scaled(s.shift());
  detail::renormalize(s, renorm_log);
  return s;
}

inline ScaledState make_state(cplx f0, cplx fp0, double renorm_log = 200.0) {
  return make_state(LogComplex::from_complex(f0), LogComplex::from_complex(fp0), renorm_log);
}

/// Dormand-Prince 5(4) integration of the scaled system from t0 to t1 along
/// `path`. Samples are taken at every accepted step, or only at `outputs`
/// (ordered in the direction of integration) when given.
inline PathResult integrate_path(const EntireFunction& A, const EntireFunction& B, const Path& path, ScaledState state,
                                 double t0, double t1, const Controller& ctrl = {},
                                 const std::vector<double>* outputs = nullptr) {
  if (!(ctrl.rel_tol > 0) || !(ctrl.abs_tol > 0) || !(ctrl.max_step > 0)) throw DomainError("controller tolerances must be positive");
  if (state.unit == 0.0) state.unit = detail::renorm_exponent(ctrl.renorm_log) * std::numbers::ln2;
  const double dir = t1 >= t0 ? 1.0 : -1.0;

  struct Y {
    cplx f, g;
  };
  auto rhs = [&](double t, const Y& y) -> Y {
    const cplx z = path.z(t), dz = path.dz(t);
    const cplx a = detail::coefficient_value(A, z);
    const cplx b = detail::coefficient_value(B, z);
    return {dz * y.g, dz * (-a * y.g - b * y.f)};
  };

  PathResult out;
  double raw_af = std::arg(state.f), raw_ag = std::arg(state.fp);
  double unwrapped_af = raw_af, unwrapped_ag = raw_ag;
  auto record = [&](double t) {
    PathSample s;
    s.t = t;
    s.z = path.z(t);
    s.logf = detail::safe_log_abs(state.f) + state.shift();
    s.logfp = detail::safe_log_abs(state.fp) + state.shift();
    if (state.f != cplx(0.0, 0.0)) {
      const double a = std::arg(state.f);
      unwrapped_af += normalize_arg(a - raw_af);
      raw_af = a;
    }
    if (state.fp != cplx(0.0, 0.0)) {
      const double a = std::arg(state.fp);
      unwrapped_ag += normalize_arg(a - raw_ag);
      raw_ag = a;
    }
    s.argf = unwrapped_af;
    s.argfp = unwrapped_ag;
    s.renorms = state.renorms;
    out.samples.push_back(s);
  };

  std::size_t next_out = 0;
  if (outputs) {
    while (next_out < outputs->size() && dir * ((*outputs)[next_out] - t0) < 0) ++next_out;
    if (next_out < outputs->size() && (*outputs)[next_out] == t0) {
      record(t0);
      ++next_out;
    }
  } else {
    record(t0);
  }

  double t = t0;
  double h = dir * std::min({std::abs(t1 - t0), ctrl.max_step, 1e-2});
  Y y{state.f, state.fp};
  Y k1 = rhs(t, y);
  while (dir * (t1 - t) > 0) {
    if (++out.steps > ctrl.max_steps) throw NumericalError("integration exceeded the step budget at t = " + std::to_string(t), t);
    double target = t1;
    if (outputs && next_out < outputs->size()) target = dir * ((*outputs)[next_out] - t1) < 0 ? (*outputs)[next_out] : t1;
    bool lands = false;
    const double h_free = h;
    if (std::abs(h) >= std::abs(target - t)) {
      h = target - t;
      lands = true;
    }
    if (!lands && std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw NumericalError("step size underflow at t = " + std::to_string(t), t);

    auto add = [](const Y& y0, double hh, std::initializer_list<std::pair<double, const Y*>> ks) {
      Y r = y0;
      for (const auto& [c, k] : ks) {
        r.f += hh * c * k->f;
        r.g += hh * c * k->g;
      }
      return r;
    };
    const Y k2 = rhs(t + h / 5, add(y, h, {{1.0 / 5, &k1}}));
    const Y k3 = rhs(t + 3 * h / 10, add(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const Y k4 = rhs(t + 4 * h / 5, add(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const Y k5 = rhs(t + 8 * h / 9, add(y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2}, {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
    const Y k6 = rhs(t + h, add(y, h, {{9017.0 / 3168, &k1}, {-355.0 / 33, &k2}, {46732.0 / 5247, &k3}, {49.0 / 176, &k4}, {-5103.0 / 18656, &k5}}));
    const Y yn = add(y, h, {{35.0 / 384, &k1}, {500.0 / 1113, &k3}, {125.0 / 192, &k4}, {-2187.0 / 6784, &k5}, {11.0 / 84, &k6}});
    const double t_new = lands ? target : t + h;
    const Y k7 = rhs(t_new, yn);
    const Y e = add(Y{}, h, {{71.0 / 57600, &k1}, {-71.0 / 16695, &k3}, {71.0 / 1920, &k4}, {-17253.0 / 339200, &k5}, {22.0 / 525, &k6}, {-1.0 / 40, &k7}});

    if (!std::isfinite(yn.f.real()) || !std::isfinite(yn.f.imag()) || !std::isfinite(yn.g.real()) || !std::isfinite(yn.g.imag())) {
      if (std::abs(h) > 1e-14 * std::max(1.0, std::abs(t))) {
        h *= 0.25;
        continue;
      }
      throw NumericalError("NaN in integration at t = " + std::to_string(t), t);
    }
    const double scale = ctrl.abs_tol + ctrl.rel_tol * std::max({std::abs(y.f), std::abs(y.g), std::abs(yn.f), std::abs(yn.g)});
    const double err = std::max(std::abs(e.f), std::abs(e.g)) / scale;
    const double size = std::max({std::abs(y.f), std::abs(y.g), std::abs(yn.f), std::abs(yn.g)});
    auto arg_jump = [&](cplx a, cplx b) {
      if (a == cplx(0.0, 0.0) || b == cplx(0.0, 0.0)) return 0.0;
      // a chord through the origin is a zero crossing; no step size resolves its arg
      const cplx d = b - a;
      const double u = std::norm(d) > 0 ? std::clamp(-(std::conj(a) * d).real() / std::norm(d), 0.0, 1.0) : 0.0;
      if (std::abs(a + u * d) <= 1e-9 * size) return 0.0;
      return std::abs(normalize_arg(std::arg(b) - std::arg(a)));
    };
    const bool arg_ok = arg_jump(y.f, yn.f) <= ctrl.max_arg_step && arg_jump(y.g, yn.g) <= ctrl.max_arg_step;
    if (err <= 1.0 && arg_ok) {
      t = t_new;
      y = yn;
      k1 = k7;
      state.f = y.f;
      state.fp = y.g;
      const long before = state.renorms;
      detail::renormalize(state, ctrl.renorm_log);
      if (state.renorms != before) {
        y = {state.f, state.fp};
        k1 = rhs(t, y);
      }
      if (!outputs) {
        record(t);
      } else if (lands && next_out < outputs->size() && t == (*outputs)[next_out]) {
        record(t);
        ++next_out;
      }
      const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h = dir * std::min(ctrl.max_step, std::max(std::abs(h), lands ? std::abs(h_free) : 0.0) * std::clamp(fac, 0.2, 5.0));
    } else if (!arg_ok && err <= 1.0) {
      h *= 0.5;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.9);
    }
  }
  out.end = state;
  return out;
}

// ---------------------------------------------------------------------------
// Rays

struct RaySample {
  double r = 0, logf = 0, argf = 0, logfp = 0, argfp = 0;
  long renorms = 0;
};

struct RaySolution {
  double theta = 0;
  std::vector<RaySample> samples;
  long renorm_count = 0;
  Controller controller;
  ScaledState end;
};

inline RaySolution to_ray_solution(double theta, const PathResult& res, const Controller& ctrl) {
  RaySolution sol;
  sol.theta = theta;
  sol.controller = ctrl;
  sol.end = res.end;
  sol.renorm_count = res.end.renorms;
  sol.samples.reserve(res.samples.size());
  for (const auto& s : res.samples) sol.samples.push_back({s.t, s.logf, s.argf, s.logfp, s.argfp, s.renorms});
  return sol;
}

/// Solves the equation along z = r e^{i theta}, r in [r0, r_max], with
/// f(r0 e^{i theta}) = f0 and f'(r0 e^{i theta}) = f0p.
inline RaySolution ray_integrate(const EntireFunction& A, const EntireFunction& B, double theta, double r0, double r_max,
                                 cplx f0, cplx f0p, const Controller& ctrl = {},
                                 const std::vector<double>* outputs = nullptr) {
  if (!(r0 > 0)) throw DomainError("ray_integrate: r0 must be positive");
  if (!(r_max > r0)) throw DomainError("ray_integrate: r_max must exceed r0");
  const ScaledState s0 = make_state(f0, f0p, ctrl.renorm_log);
  return to_ray_solution(theta, integrate_path(A, B, Path::ray(theta), s0, r0, r_max, ctrl, outputs), ctrl);
}

/// Builds ray samples of a known function by direct evaluation.
inline RaySolution sample_ray(const EntireFunction& f, double theta, const std::vector<double>& radii) {
  RaySolution sol;
  sol.theta = theta;
  double raw_f = 0, raw_fp = 0, un_f = 0, un_fp = 0;
  bool first = true;
  for (double r : radii) {
    const Jet j = eval_jet(f, std::polar(r, theta));
    if (first) {
      raw_f = un_f = j.value.arg;
      raw_fp = un_fp = j.deriv.arg;
      first = false;
    } else {
      un_f += normalize_arg(j.value.arg - raw_f);
      un_fp += normalize_arg(j.deriv.arg - raw_fp);
      raw_f = j.value.arg;
      raw_fp = j.deriv.arg;
    }
    sol.samples.push_back({r, j.value.logmod, un_f, j.deriv.logmod, un_fp, 0});
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Residual of a candidate solution

struct ResidualReport {
  double max_rel_residual = 0.0;
  std::size_t evaluated = 0;
  std::vector<std::string> notes;
};

/// |f'' + A f' + B f| / max(|f''|, |A f'|, |B f|) at each point, in log form.
inline ResidualReport residual_check(const EntireFunction& f, const EntireFunction& A, const EntireFunction& B,
                                     const std::vector<cplx>& points) {
  EntireFunction d1, d2;
  try {
    d1 = derivative(f);
    d2 = derivative(d1);
  } catch (const NoClosedForm& e) {
    throw DomainError(std::string("residual_check: candidate has no closed-form second derivative: ") + e.what());
  }
  ResidualReport rep;
  for (cplx z : points) {
    const LogComplex terms[3] = {eval_log(d2, z), eval_log(A, z) * eval_log(d1, z), eval_log(B, z) * eval_log(f, z)};
    const double top = std::max({terms[0].logmod, terms[1].logmod, terms[2].logmod});
    if (top == kNegInf) {
      rep.notes.push_back("all terms vanish at z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + "); skipped");
      continue;
    }
    const LogComplex s = log_sum(terms);
    const double rel = s.is_zero() ? 0.0 : std::exp(s.logmod - top);
    rep.max_rel_residual = std::max(rep.max_rel_residual, rel);
    ++rep.evaluated;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Local orders along a ray

struct OrderWindowsReport {
  std::string verdict;  // "bounded", "increasing" or "decaying ray"
  std::vector<std::pair<double, double>> windows;  // (window centre r, local order)
  double final_order = 0.0;
};

/// Slopes of log(log|f|) against log r on equal-width windows in log r,
/// covering the samples with log|f| > 1.
inline OrderWindowsReport solution_order_windows(const RaySolution& sol, int windows = 8) {
  std::vector<double> x, y;
  for (const auto& s : sol.samples)
    if (s.logf > 1.0 && s.r > 0) {
      x.push_back(std::log(s.r));
      y.push_back(std::log(s.logf));
    }
  OrderWindowsReport rep;
  if (x.empty()) {
    rep.verdict = "decaying ray";
    return rep;
  }
  if (x.size() < 20) throw DomainError("solution_order_windows: need at least 20 samples with log|f| > 1");
  const double lo = x.front(), hi = x.back();
  const double w = (hi - lo) / windows;
  std::size_t i = 0;
  for (int k = 0; k < windows; ++k) {
    const double a = lo + k * w, b = k + 1 == windows ? hi + 1e-12 : lo + (k + 1) * w;
    std::vector<double> wx, wy;
    while (i < x.size() && x[i] < b) {
      if (x[i] >= a) {
        wx.push_back(x[i]);
        wy.push_back(y[i]);
      }
      ++i;
    }
    if (wx.size() < 3) continue;
    rep.windows.emplace_back(std::exp(0.5 * (a + b)), fit_line(wx, wy).slope);
  }
  if (rep.windows.empty()) throw DomainError("solution_order_windows: samples too sparse for windowed fits");
  rep.final_order = rep.windows.back().second;
  const std::size_t n = rep.windows.size();
  bool increasing = n >= 3;
  for (std::size_t k = n >= 3 ? n - 2 : n; k < n; ++k)
    if (!(rep.windows[k].second > rep.windows[k - 1].second + 0.01)) increasing = false;
  rep.verdict = increasing ? "increasing" : "bounded";
  return rep;
}

// ---------------------------------------------------------------------------
// Wronskian

/// W = f1 f2' - f2 f1' in log form from two scaled states at the same point.
inline LogComplex wronskian(const ScaledState& s1, const ScaledState& s2) {
  const cplx w = s1.f * s2.fp - s2.f * s1.fp;
  return LogComplex::from_complex(w).shifted(s1.shift() + s2.shift());
}

/// Wronskian from two sample rows taken at the same point.
inline LogComplex wronskian(const RaySample& a, const RaySample& b) {
  const LogComplex f1 = LogComplex::from_polar_log(a.logf, a.argf), f1p = LogComplex::from_polar_log(a.logfp, a.argfp);
  const LogComplex f2 = LogComplex::from_polar_log(b.logf, b.argf), f2p = LogComplex::from_polar_log(b.logfp, b.argfp);
  return f1 * f2p - f2 * f1p;
}

}  // namespace growthlab
