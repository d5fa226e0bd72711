#pragma once

// Growth quantities of entire functions on circles |z| = r: maximum and
// minimum modulus, the Nevanlinna characteristic, finite-scale orders,
// logarithmic densities of radius sets, and the circle-based bound checks
// built on them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/entire_function.hpp"
#include "growthlab/numerics.hpp"

namespace growthlab {

inline double logmod_at(const EntireFunction& f, double r, double theta) { return eval_log(f, std::polar(r, theta)).logmod; }

// ---------------------------------------------------------------------------
// Maximum / minimum modulus

struct CircleExtremum {
  double theta = 0.0;
  double logmod = 0.0;
};

namespace detail {

/// Extremum of sign*log|f| on |z| = r: coarse scan, then golden-section on the
/// three best local brackets.
inline CircleExtremum circle_extremum(const EntireFunction& f, double r, double sign, int n_theta) {
  if (!(r > 0)) throw DomainError("modulus on circle: r must be positive");
  const double h = kTwoPi / n_theta;
  std::vector<double> g(n_theta);
  for (int i = 0; i < n_theta; ++i) g[i] = sign * logmod_at(f, r, i * h);

  std::vector<int> peaks;
  for (int i = 0; i < n_theta; ++i) {
    const double prev = g[(i + n_theta - 1) % n_theta];
    const double next = g[(i + 1) % n_theta];
    if (g[i] >= prev && g[i] >= next) peaks.push_back(i);
  }
  if (peaks.empty()) peaks.push_back(static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin()));
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return g[a] > g[b] || (g[a] == g[b] && a < b); });
  if (peaks.size() > 3) peaks.resize(3);

  CircleExtremum best{peaks[0] * h, g[peaks[0]]};
  for (int i : peaks) {
    if (std::isinf(g[i])) continue;
    auto obj = [&](double t) { return sign * logmod_at(f, r, t); };
    const auto [t, v] = golden_max(obj, (i - 1) * h, (i + 1) * h, 1e-10);
    if (v > best.logmod) best = {t, v};
  }
  best.theta = normalize_angle_positive(best.theta);
  best.logmod *= sign;
  return best;
}

}  // namespace detail

/// log M(r, f) and a maximizing angle.
inline CircleExtremum max_modulus(const EntireFunction& f, double r, int n_theta = 1024) {
  return detail::circle_extremum(f, r, 1.0, n_theta);
}

/// log L(r, f) and a minimizing angle; values below -1e3 are reported as -inf.
inline CircleExtremum min_modulus(const EntireFunction& f, double r, int n_theta = 1024) {
  CircleExtremum e = detail::circle_extremum(f, r, -1.0, n_theta);
  if (e.logmod < -1e3) e.logmod = kNegInf;
  return e;
}

// ---------------------------------------------------------------------------
// Nevanlinna characteristic T(r, f) = (1/2pi) int log+ |f(re^{it})| dt

namespace detail {

/// Bisection for the angle in [a, b] where g changes sign.
template <class G>
double bisect_crossing(G&& g, double a, double b, double ga, double tol = 1e-10) {
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Trapezoid over a uniform periodic grid for max(v, 0), with cells that
/// cross zero split at the bisected crossing.
template <class G>
double positive_part_trapezoid(G&& g, const std::vector<double>& v) {
  const std::size_t n = v.size();
  const double h = kTwoPi / n;
  std::vector<double> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = v[i], b = v[(i + 1) % n];
    const double t0 = i * h, t1 = (i + 1) * h;
    if (a <= 0 && b <= 0) {
      cells[i] = 0.0;
    } else if (a >= 0 && b >= 0) {
      cells[i] = 0.5 * h * (a + b);
    } else {
      const double tc = bisect_crossing(g, t0, t1, a);
      cells[i] = a > 0 ? 0.5 * (tc - t0) * a : 0.5 * (t1 - tc) * b;
    }
  }
  return pairwise_sum(cells);
}

}  // namespace detail

inline double nevanlinna_T(const EntireFunction& f, double r) {
  if (!(r > 0)) throw DomainError("nevanlinna_T: r must be positive");
  auto g = [&](double t) { return logmod_at(f, r, t); };
  std::size_t n = 512;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = g(i * kTwoPi / n);
  double prev = detail::positive_part_trapezoid(g, v) / kTwoPi;
  while (n < (std::size_t{1} << 20)) {
    std::vector<double> w(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      w[2 * i] = v[i];
      w[2 * i + 1] = g((2 * i + 1) * kTwoPi / (2 * n));
    }
    v = std::move(w);
    n *= 2;
    const double cur = detail::positive_part_trapezoid(g, v) / kTwoPi;
    if (std::abs(cur - prev) < 1e-8 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw NumericalError("nevanlinna_T: no convergence with 2^20 points", prev);
}

// ---------------------------------------------------------------------------
// Growth profiles

struct GrowthRow {
  double r = 0, logM = 0, thetaM = 0, logL = 0, thetaL = 0, T = 0;
};

struct GrowthProfile {
  std::vector<GrowthRow> rows;
  double ratio = 1.0;  // geometric grid ratio q
};

inline GrowthRow growth_row(const EntireFunction& f, double r) {
  const auto M = max_modulus(f, r);
  const auto L = min_modulus(f, r);
  return {r, M.logmod, M.theta, std::min(L.logmod, M.logmod), L.theta, nevanlinna_T(f, r)};
}

/// Rows on a geometric grid; rows are computed in parallel but each row is a
/// pure function of (f, r), so output does not depend on the worker count.
inline GrowthProfile growth_profile(const EntireFunction& f, double r_min, double r_max, int points) {
  if (!(r_min > 0) || !(r_max > r_min) || points < 2) throw DomainError("growth_profile: need 0 < r_min < r_max and points >= 2");
  const auto grid = geometric_grid(r_min, r_max, points);
  GrowthProfile p;
  p.ratio = grid[1] / grid[0];
  p.rows = parallel_map<GrowthRow>(grid.size(), [&](std::size_t i) { return growth_row(f, grid[i]); });
  return p;
}

// ---------------------------------------------------------------------------
// Order estimates

struct OrderWindow {
  double r_lo = 0, r_hi = 0, slope = 0, rms = 0;
};

struct OrderEstimate {
  double rho = 0;  // finite-scale limsup proxy
  double mu = 0;   // finite-scale liminf proxy
  int window = 5;
  double residual = 0;
  std::vector<OrderWindow> windows;
};

/// Sliding-window slopes of log log M against log r over the upper half of
/// the radii where log M > 1.
inline OrderEstimate order_estimate(const GrowthProfile& profile, int window = 5) {
  std::vector<double> x, y, rs;
  for (const auto& row : profile.rows)
    if (row.logM > 1.0 && std::isfinite(row.logM)) {
      x.push_back(std::log(row.r));
      y.push_back(std::log(row.logM));
      rs.push_back(row.r);
    }
  if (x.empty()) throw DomainError("order_estimate: function too small on grid (all log M <= 1)");
  if (static_cast<int>(x.size()) < std::max(6, window)) throw DomainError("order_estimate: need at least 6 rows with log M > 1");
  const int n = static_cast<int>(x.size());
  const int first = std::min(n / 2, n - window);
  OrderEstimate est;
  est.window = window;
  est.rho = -std::numeric_limits<double>::infinity();
  est.mu = std::numeric_limits<double>::infinity();
  for (int s = first; s + window <= n; ++s) {
    const auto fit = fit_line(std::span(x).subspan(s, window), std::span(y).subspan(s, window));
    est.windows.push_back({rs[s], rs[s + window - 1], fit.slope, fit.rms});
    est.rho = std::max(est.rho, fit.slope);
    est.mu = std::min(est.mu, fit.slope);
    est.residual = std::max(est.residual, fit.rms);
  }
  est.rho = std::max(est.rho, 0.0);
  est.mu = std::clamp(est.mu, 0.0, est.rho);
  return est;
}

/// Growth rate of n(r) = #{k : |a_k| <= r}: slope of log n(r) against log r,
/// fitted over the upper half of the distinct moduli.
inline double convergence_exponent(const ZeroSequence& zeros) {
  if (zeros.size() < 8) throw DomainError("convergence_exponent: need at least 8 zeros");
  std::vector<double> lm = zeros.log_moduli();
  std::sort(lm.begin(), lm.end());
  std::vector<double> x, y;
  for (std::size_t k = 0; k < lm.size(); ++k) {
    if (k + 1 < lm.size() && lm[k + 1] == lm[k]) continue;  // count ties at the last one
    x.push_back(lm[k]);
    y.push_back(std::log(static_cast<double>(k + 1)));
  }
  if (x.size() < 4) throw DomainError("convergence_exponent: too few distinct moduli");
  const std::size_t first = x.size() / 2;
  return std::max(0.0, fit_line(std::span(x).subspan(first), std::span(y).subspan(first)).slope);
}

// ---------------------------------------------------------------------------
// Gap conditions

enum class GapMode { ReciprocalSum, Standard };

struct GapReport {
  bool verdict = false;
  double statistic = 0.0;
  std::string mode;
};

/// Fabry-gap test on a finite exponent list.
///  Standard: lambda_n / n -> infinity, judged by min(last quartile) exceeding
///  twice max(first quartile) of lambda_n / n.
///  ReciprocalSum: sum 1/lambda_n diverges, judged by the slope of the partial sums
///  against log n over the upper half of log n exceeding 0.1.
inline GapReport fabry_gap_check(const std::vector<std::uint64_t>& exponents, GapMode mode) {
  if (exponents.size() < 8) throw DomainError("fabry_gap_check: need at least 8 exponents");
  for (std::size_t i = 1; i < exponents.size(); ++i)
    if (exponents[i] <= exponents[i - 1]) throw DomainError("fabry_gap_check: exponents must be strictly increasing");
  GapReport rep;
  if (mode == GapMode::Standard) {
    rep.mode = "standard";
    const std::size_t n = exponents.size();
    const std::size_t q = std::max<std::size_t>(1, n / 4);
    double first_max = 0.0, last_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q; ++i) first_max = std::max(first_max, static_cast<double>(exponents[i]) / (i + 1));
    for (std::size_t i = n - q; i < n; ++i) last_min = std::min(last_min, static_cast<double>(exponents[i]) / (i + 1));
    rep.statistic = first_max > 0 ? last_min / first_max : std::numeric_limits<double>::infinity();
    rep.verdict = rep.statistic > 2.0;
    return rep;
  }
  rep.mode = "reciprocal-sum";
  std::vector<double> x, y;
  double s = 0.0;
  std::size_t idx = 0;
  for (std::uint64_t lam : exponents) {
    if (lam == 0) continue;
    ++idx;
    s += 1.0 / static_cast<double>(lam);
    x.push_back(std::log(static_cast<double>(idx)));
    y.push_back(s);
  }
  const double half = 0.5 * x.back();
  std::size_t first = 0;
  while (first < x.size() && x[first] < half) ++first;
  first = std::min(first, x.size() - 3);
  rep.statistic = fit_line(std::span(x).subspan(first), std::span(y).subspan(first)).slope;
  rep.verdict = rep.statistic > 0.1;
  return rep;
}

/// Exponents with nonzero Taylor coefficient among the first n.
inline std::vector<std::uint64_t> taylor_exponents(const EntireFunction& f, std::size_t n = 64) {
  const auto c = taylor_coefficients(f, n);
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (std::abs(c[k]) > 1e-250) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// Radius sets and logarithmic density

struct RadiusSet {
  std::vector<std::pair<double, double>> intervals;  // disjoint, sorted, 1 <= lo < hi

  /// Clips to [1, inf), sorts and merges overlapping or touching intervals.
  void normalize() {
    std::vector<std::pair<double, double>> v;
    for (auto [lo, hi] : intervals) {
      lo = std::max(lo, 1.0);
      if (hi > lo) v.emplace_back(lo, hi);
    }
    std::sort(v.begin(), v.end());
    intervals.clear();
    for (const auto& iv : v) {
      if (!intervals.empty() && iv.first <= intervals.back().second)
        intervals.back().second = std::max(intervals.back().second, iv.second);
      else
        intervals.push_back(iv);
    }
  }

  bool empty() const { return intervals.empty(); }

  /// int_{S cap [1, r]} dt / t
  double log_measure_upto(double r) const {
    double m = 0.0;
    for (const auto& [lo, hi] : intervals) {
      if (lo >= r) break;
      m += std::log(std::min(hi, r) / lo);
    }
    return m;
  }
};

struct DensityEstimate {
  double upper = 0.0;
  double lower = 0.0;
};

/// Upper/lower logarithmic density proxies: the density function
/// (1/log r) int_{S cap [1,r]} dt/t at 50 geometric checkpoints across the last
/// decade below r_max; upper = max, lower = min.
inline DensityEstimate log_density(const RadiusSet& s, double r_max) {
  if (!(r_max > 10)) throw DomainError("log_density: r_max must exceed 10");
  if (s.empty()) return {};
  DensityEstimate d{-1.0, 2.0};
  for (double r : geometric_grid(r_max / 10.0, r_max, 50)) {
    const double v = s.log_measure_upto(r) / std::log(r);
    d.upper = std::max(d.upper, v);
    d.lower = std::min(d.lower, v);
  }
  return d;
}

namespace detail {

/// Grid cells [r_i, r_{i+1}) of the flagged rows, joined into a RadiusSet.
inline RadiusSet cells_to_set(const GrowthProfile& p, const std::vector<bool>& flag) {
  RadiusSet s;
  const auto& rows = p.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!flag[i]) continue;
    const double hi = i + 1 < rows.size() ? rows[i + 1].r : rows[i].r * p.ratio;
    s.intervals.emplace_back(rows[i].r, hi);
  }
  s.normalize();
  return s;
}

inline double profile_top(const GrowthProfile& p) { return p.rows.back().r * p.ratio; }

}  // namespace detail

// ---------------------------------------------------------------------------
// T(r) ~ log M(r) test

struct TsimReport {
  std::vector<std::pair<double, double>> ratios;  // (r, T/logM) for rows with logM > 1
  RadiusSet qualifying;
  double upper_density = 0.0;
  bool positive = false;
};

inline TsimReport tsim_check(const GrowthProfile& profile, double tol) {
  TsimReport rep;
  std::vector<bool> flag(profile.rows.size(), false);
  for (std::size_t i = 0; i < profile.rows.size(); ++i) {
    const auto& row = profile.rows[i];
    if (!(row.logM > 1.0)) continue;
    const double q = row.T / row.logM;
    rep.ratios.emplace_back(row.r, q);
    flag[i] = q >= 1.0 - tol;
  }
  rep.qualifying = detail::cells_to_set(profile, flag);
  rep.upper_density = log_density(rep.qualifying, detail::profile_top(profile)).upper;
  rep.positive = rep.upper_density > 0.05;
  return rep;
}

// ---------------------------------------------------------------------------
// Exceptional arcs I_r = {theta : log|f(re^{it})| <= (1-c) log M(r)}

inline double exceptional_arc_measure(const EntireFunction& f, double r, double c, int n_theta = 8192) {
  if (!(c > 0 && c < 0.25)) throw DomainError("exceptional_arc_measure: need 0 < c < 1/4");
  const double logM = max_modulus(f, r).logmod;
  if (!(logM > 0)) throw DomainError("exceptional_arc_measure: need log M(r) > 0");
  const double level = (1.0 - c) * logM;
  auto g = [&](double t) { return logmod_at(f, r, t) - level; };
  const double h = kTwoPi / n_theta;
  std::vector<double> v(n_theta);
  for (int i = 0; i < n_theta; ++i) v[i] = g(i * h);
  std::vector<double> parts(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double a = v[i], b = v[(i + 1) % n_theta];
    if (a <= 0 && b <= 0) {
      parts[i] = h;
    } else if (a > 0 && b > 0) {
      parts[i] = 0.0;
    } else {
      const double tc = detail::bisect_crossing(g, i * h, (i + 1) * h, a, 1e-12);
      parts[i] = a <= 0 ? tc - i * h : (i + 1) * h - tc;
    }
  }
  return pairwise_sum(parts);
}

// ---------------------------------------------------------------------------
// Exponential-polynomial indicator and bounds

/// delta(P, theta) = Re(a_n e^{i n theta}) for the leading coefficient a_n.
inline double delta_indicator(const std::vector<cplx>& P, double theta) {
  const int n = poly_degree(P);
  if (n < 1) throw DomainError("delta_indicator: P must have degree >= 1");
  return (P[n] * std::polar(1.0, n * theta)).real();
}

struct BankRay {
  double theta = 0, delta = 0;
  double threshold_R = 0;  // inf when the bound fails at the largest radius
  std::vector<double> violations;  // radii where the bound fails
};

struct BankReport {
  std::vector<BankRay> rays;
  double max_threshold = 0;
  bool holds_past_finite_R = false;
};

/// For A = h e^P: log|A| >= (1-eps) delta r^n where delta > 0, and <= where
/// delta < 0, checked on 64 sampled directions with |delta| > 0.1.
inline BankReport bank_bound_check(const EntireFunction& A, const std::vector<double>& radii, double eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("bank_bound_check: eps must be in (0, 1)");
  const auto split = split_exp_factor(A);
  if (!split) throw DomainError("bank_bound_check: A has no exp(P) factor");
  const int n = poly_degree(split->P);
  if (n < 1) throw DomainError("bank_bound_check: P must be non-constant");
  BankReport rep;
  rep.holds_past_finite_R = true;
  for (int i = 0; i < 64; ++i) {
    const double theta = kTwoPi * (i + 0.5) / 64.0;
    const double d = delta_indicator(split->P, theta);
    if (std::abs(d) <= 0.1) continue;
    BankRay ray{theta, d, radii.front(), {}};
    bool last_ok = true;
    for (double r : radii) {
      const double lhs = logmod_at(A, r, theta);
      const double bound = (1.0 - eps) * d * std::pow(r, n);
      const bool ok = d > 0 ? lhs >= bound : lhs <= bound;
      if (!ok) {
        ray.violations.push_back(r);
        ray.threshold_R = std::numeric_limits<double>::infinity();
      } else if (!last_ok || std::isinf(ray.threshold_R)) {
        ray.threshold_R = r;
      }
      last_ok = ok;
    }
    rep.max_threshold = std::max(rep.max_threshold, ray.threshold_R);
    if (std::isinf(ray.threshold_R)) rep.holds_past_finite_R = false;
    rep.rays.push_back(std::move(ray));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Minimum/maximum modulus comparisons

struct Annulus {
  double r_lo = 0, r_hi = 0;
  double ratio() const { return r_hi / r_lo; }
};

struct MinMaxReport {
  std::string mode;
  double parameter = 0;
  RadiusSet qualifying;
  double upper_density = 0;      // gap mode
  std::vector<Annulus> annuli;   // annuli mode
};

/// Gap mode: rows with log L > (1 - xi) log M, with upper log density.
inline MinMaxReport minmax_gap_check(const GrowthProfile& profile, double xi) {
  if (!(xi > 0 && xi < 1)) throw DomainError("minmax_ratio_check: xi must be in (0, 1)");
  MinMaxReport rep{"gap", xi, {}, 0, {}};
  std::vector<bool> flag(profile.rows.size());
  for (std::size_t i = 0; i < profile.rows.size(); ++i) {
    const auto& row = profile.rows[i];
    flag[i] = row.logM > 0 && row.logL > (1.0 - xi) * row.logM;
  }
  rep.qualifying = detail::cells_to_set(profile, flag);
  rep.upper_density = log_density(rep.qualifying, detail::profile_top(profile)).upper;
  return rep;
}

/// Annuli mode: maximal runs of grid radii with log L >= d log M (log M > 0).
inline MinMaxReport minmax_annuli_check(const GrowthProfile& profile, double d) {
  if (!(d > 0 && d < 1)) throw DomainError("minmax_ratio_check: d must be in (0, 1)");
  MinMaxReport rep{"annuli", d, {}, 0, {}};
  std::vector<bool> flag(profile.rows.size());
  for (std::size_t i = 0; i < profile.rows.size(); ++i) {
    const auto& row = profile.rows[i];
    flag[i] = row.logM > 0 && row.logL >= d * row.logM;
  }
  for (std::size_t i = 0; i < flag.size();) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < flag.size() && flag[j + 1]) ++j;
    if (j > i) rep.annuli.push_back({profile.rows[i].r, profile.rows[j].r});
    i = j + 1;
  }
  for (const auto& a : rep.annuli) rep.qualifying.intervals.emplace_back(a.r_lo, a.r_hi);
  rep.qualifying.normalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Arc integral of the logarithmic derivative

struct ArcIntegral {
  double integral = 0;  // r int_J |f'/f| dtheta
  double T = 0;
  double ratio = 0;     // integral / (delta log(1/delta) T)
};

inline ArcIntegral arc_log_deriv_integral(const EntireFunction& f, double r, double theta_lo, double theta_hi) {
  const double delta = theta_hi - theta_lo;
  if (!(delta > 0 && delta < 0.5)) throw DomainError("arc_log_deriv_integral: arc length must be in (0, 1/2)");
  // zero pre-scan: a local minimum of log|f| far below the arc maximum
  constexpr int scan = 1024;
  std::vector<double> v(scan + 1);
  for (int i = 0; i <= scan; ++i) v[i] = logmod_at(f, r, theta_lo + delta * i / scan);
  const double top = *std::max_element(v.begin(), v.end());
  for (int i = 0; i <= scan; ++i) {
    const bool local_min = (i == 0 || v[i] <= v[i - 1]) && (i == scan || v[i] <= v[i + 1]);
    if (!local_min) continue;
    const double a = theta_lo + delta * std::max(0, i - 1) / scan;
    const double b = theta_lo + delta * std::min(scan, i + 1) / scan;
    auto [t, val] = golden_max([&](double th) { return -logmod_at(f, r, th); }, a, b, 1e-13);
    if (std::min(v[i], -val) < top - 30.0 || std::isinf(val))
      throw DomainError("arc_log_deriv_integral: f has a zero on the arc near theta = " + std::to_string(t));
  }
  auto integrand = [&](double t) { return r * std::abs(eval_logderiv(f, std::polar(r, t))); };
  std::size_t n = 64;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = integrand(theta_lo + delta * i / n);
  auto trap = [&](const std::vector<double>& w) {
    std::vector<double> inner(w.begin() + 1, w.end() - 1);
    return delta / (w.size() - 1) * (0.5 * (w.front() + w.back()) + pairwise_sum(inner));
  };
  double prev = trap(vals);
  double cur = prev;
  for (int level = 0; level < 20; ++level) {
    std::vector<double> w(2 * n + 1);
    for (std::size_t i = 0; i <= n; ++i) w[2 * i] = vals[i];
    for (std::size_t i = 0; i < n; ++i) w[2 * i + 1] = integrand(theta_lo + delta * (2 * i + 1) / (2 * n));
    vals = std::move(w);
    n *= 2;
    cur = trap(vals);
    if (std::abs(cur - prev) < 1e-7 * std::abs(cur)) break;
    prev = cur;
  }
  ArcIntegral out;
  out.integral = cur;
  out.T = nevanlinna_T(f, r);
  const double denom = delta * std::log(1.0 / delta) * out.T;
  out.ratio = denom > 0 ? cur / denom : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace growthlab
