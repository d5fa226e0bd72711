#pragma once

// Finite-scale checks of pointwise estimates for entire functions and ODE
// solutions: derivative-ratio bounds, |f/f'| minima on circles, convergence
// to an asymptotic constant, and minimum modulus on the negative axis for
// products with zeros confined to sectors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/growth.hpp"
#include "growthlab/ode.hpp"

namespace growthlab {

// ---------------------------------------------------------------------------
// |f^(k) / f^(j)| <= |z|^{(k-j)(rho - 1 + eps)}

struct RatioViolation {
  double theta = 0, r = 0;
  int k = 0, j = 0;
  double excess = 0;  // log|ratio| - log bound
};

struct GundersenReport {
  std::vector<RatioViolation> violations;
  std::vector<double> exceptional_rays;  // rays still violating at the largest radius
  RadiusSet violation_radii;
  double violation_log_measure = 0;
  bool holds = false;  // exceptional rays form at most 1/8 of the sampled rays
};

inline GundersenReport gundersen_ratio_check(const EntireFunction& f, double rho, double eps,
                                             const std::vector<std::pair<int, int>>& pairs, const std::vector<double>& radii,
                                             int rays = 32) {
  int kmax = 0;
  for (auto [k, j] : pairs) {
    if (!(k > j && j >= 0)) throw DomainError("gundersen_ratio_check: pairs need k > j >= 0");
    kmax = std::max(kmax, k);
  }
  std::vector<EntireFunction> d{f};
  for (int i = 1; i <= kmax; ++i) d.push_back(derivative(d.back()));

  GundersenReport rep;
  std::vector<bool> bad_radius(radii.size(), false);
  for (int i = 0; i < rays; ++i) {
    const double theta = kTwoPi * i / rays;
    bool bad_at_top = false;
    for (std::size_t m = 0; m < radii.size(); ++m) {
      const double r = radii[m];
      const cplx z = std::polar(r, theta);
      std::vector<double> logs(kmax + 1);
      for (int q = 0; q <= kmax; ++q) logs[q] = eval_log(d[q], z).logmod;
      for (auto [k, j] : pairs) {
        if (logs[j] == kNegInf) continue;
        const double excess = logs[k] - logs[j] - (k - j) * (rho - 1 + eps) * std::log(r);
        if (excess > 1e-12) {
          rep.violations.push_back({theta, r, k, j, excess});
          bad_radius[m] = true;
          if (m + 1 == radii.size()) bad_at_top = true;
        }
      }
    }
    if (bad_at_top) rep.exceptional_rays.push_back(theta);
  }
  for (std::size_t m = 0; m < radii.size(); ++m)
    if (bad_radius[m]) {
      const double hi = m + 1 < radii.size() ? radii[m + 1] : radii[m] * (radii.size() > 1 ? radii[m] / radii[m - 1] : 2.0);
      rep.violation_radii.intervals.emplace_back(radii[m], hi);
    }
  rep.violation_radii.normalize();
  rep.violation_log_measure = rep.violation_radii.log_measure_upto(std::numeric_limits<double>::infinity());
  rep.holds = rep.exceptional_rays.size() * 8 <= static_cast<std::size_t>(rays);
  return rep;
}

// ---------------------------------------------------------------------------
// min over |z| = r of |f / f'|

struct FOverFprime {
  cplx z;
  double value = 0;
};

inline FOverFprime pointwise_f_over_fprime_min(const EntireFunction& f, double r, int n_theta = 4096) {
  if (!(r > 0)) throw DomainError("pointwise_f_over_fprime_min: r must be positive");
  auto log_ratio = [&](double t) {
    const Jet j = eval_jet(f, std::polar(r, t));
    if (j.value.is_zero()) return kNegInf;
    if (j.deriv.is_zero()) return std::numeric_limits<double>::infinity();
    return j.value.logmod - j.deriv.logmod;
  };
  std::vector<double> v(n_theta);
  bool any_finite = false;
  for (int i = 0; i < n_theta; ++i) {
    v[i] = log_ratio(kTwoPi * i / n_theta);
    if (v[i] != std::numeric_limits<double>::infinity()) any_finite = true;
  }
  if (!any_finite) throw DomainError("pointwise_f_over_fprime_min: f' vanishes at every sample");
  const int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  double t_best = kTwoPi * best / n_theta, v_best = v[best];
  if (v_best != kNegInf) {
    const double h = kTwoPi / n_theta;
    auto [t, negv] = golden_max([&](double th) { return -log_ratio(th); }, t_best - h, t_best + h, 1e-12);
    if (-negv < v_best) {
      t_best = t;
      v_best = -negv;
    }
  }
  return {std::polar(r, normalize_angle_positive(t_best)), v_best == kNegInf ? 0.0 : std::exp(v_best)};
}

/// Smallest grid radius R such that min |f/f'| <= r holds for every grid r >= R
/// (infinity when it fails at the largest radius).
inline double f_over_fprime_threshold(const EntireFunction& f, const std::vector<double>& radii) {
  double R = std::numeric_limits<double>::infinity();
  for (auto it = radii.rbegin(); it != radii.rend(); ++it) {
    if (pointwise_f_over_fprime_min(f, *it).value <= *it)
      R = *it;
    else
      break;
  }
  return R;
}

// ---------------------------------------------------------------------------
// f -> b along a ray with |f - b| ~ exp(-alpha r^beta)

struct AsymptoticFit {
  cplx b;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool identifiable = false;
};

inline AsymptoticFit asymptotic_constant_fit(const RaySolution& sol) {
  if (sol.samples.size() < 4) throw DomainError("asymptotic_constant_fit: too few samples");
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& s : sol.samples) lo = std::min(lo, s.logf);
  const auto& last = sol.samples.back();
  if (last.logf > 700.0 || last.logf - lo > 20.0) throw DomainError("asymptotic_constant_fit: not in decay regime (ray is unbounded)");

  AsymptoticFit fit;
  const LogComplex bl = LogComplex::from_polar_log(last.logf, last.argf);
  fit.b = bl.to_complex();
  const double floor = 1e-8 * std::max(std::abs(fit.b), 1e-300);
  std::vector<double> x, y;
  for (std::size_t i = sol.samples.size() / 2; i + 1 < sol.samples.size(); ++i) {
    const auto& s = sol.samples[i];
    const cplx d = LogComplex::from_polar_log(s.logf, s.argf).to_complex() - fit.b;
    const double ad = std::abs(d);
    if (!(ad > floor) || !(ad < 1.0) || !(s.r > 0)) continue;
    x.push_back(std::log(s.r));
    y.push_back(std::log(-std::log(ad)));
  }
  if (x.size() < 3) return fit;
  const LineFit lf = fit_line(x, y);
  fit.beta = lf.slope;
  fit.alpha = std::exp(lf.intercept);
  fit.residual = lf.rms;
  fit.identifiable = true;
  return fit;
}

// ---------------------------------------------------------------------------
// |f(-r)| <= exp(-c r^p) for products with zeros in S(p, eps)

/// Zero zone S(p, eps): |theta| <= pi/(2(p+1)) - eps for odd p,
/// pi/(2p) + eps <= |theta| <= 3 pi/(2(p+1)) - eps for even p.
inline bool in_zero_zone(double theta, int p, double eps) {
  const double t = std::abs(normalize_arg(theta));
  if (p % 2 == 1) return t <= kPi / (2.0 * (p + 1)) - eps;
  return t >= kPi / (2.0 * p) + eps && t <= 3.0 * kPi / (2.0 * (p + 1)) - eps;
}

struct KwonReport {
  int genus = 0;
  double threshold_R = 0;  // inf when the bound fails at the largest radius
  std::pair<double, double> longest_run{0, 0};
  bool holds_past_finite_R = false;
  std::vector<std::pair<double, double>> rows;  // (r, log|f(-r)| + c r^p)
};

inline KwonReport kwon_min_modulus_check(const EntireFunction& f, double c, double eps, const std::vector<double>& radii) {
  const auto* pn = std::get_if<ProductNode>(&f.node().v);
  if (!pn) throw DomainError("kwon_min_modulus_check: f must be a canonical product");
  const int p = f.meta.genus.value_or(pn->genus);
  if (p < 1) throw DomainError("kwon_min_modulus_check: genus must be at least 1");
  if (!(c > 1)) throw DomainError("kwon_min_modulus_check: c must exceed 1");
  for (std::size_t k = 0; k < pn->zeros.size(); ++k) {
    const double a = pn->zeros.zeros[k].arg;
    if (!in_zero_zone(a, p, eps))
      throw DomainError("kwon_min_modulus_check: zero #" + std::to_string(k + 1) + " with argument " + std::to_string(a) +
                        " lies outside the zone S(" + std::to_string(p) + ", eps)");
  }
  KwonReport rep;
  rep.genus = p;
  std::vector<bool> ok(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const double gap = eval_log(f, cplx(-r, 0.0)).logmod + c * std::pow(r, p);
    rep.rows.emplace_back(r, gap);
    ok[i] = gap <= 0;
  }
  rep.threshold_R = std::numeric_limits<double>::infinity();
  for (std::size_t i = radii.size(); i-- > 0;) {
    if (!ok[i]) break;
    rep.threshold_R = radii[i];
  }
  rep.holds_past_finite_R = std::isfinite(rep.threshold_R);
  for (std::size_t i = 0; i < ok.size();) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < ok.size() && ok[j + 1]) ++j;
    if (radii[j] - radii[i] >= rep.longest_run.second - rep.longest_run.first) rep.longest_run = {radii[i], radii[j]};
    i = j + 1;
  }
  return rep;
}

}  // namespace growthlab
