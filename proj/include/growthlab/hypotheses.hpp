#pragma once

// Structured hypothesis verdicts for a coefficient pair (A, B) and a
// finite-scale surrogate for "all solutions have infinite order".

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "growthlab/growth.hpp"
#include "growthlab/lemmas.hpp"
#include "growthlab/ode.hpp"

namespace growthlab {

enum class Verdict { Holds, Fails, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "undetermined";
  }
}

struct HypothesisItem {
  std::string name;
  Verdict verdict = Verdict::Undetermined;
  std::string detail;
};

struct TheoremCheck {
  std::string name;
  std::vector<HypothesisItem> items;
  Verdict overall = Verdict::Undetermined;
};

struct HypothesisReport {
  std::vector<TheoremCheck> checks;
  std::string summary;
  std::vector<std::string> notes;
};

struct HypothesisOptions {
  std::optional<std::vector<cplx>> P;  // A is tested as a solution of w'' + P w = 0
  double r_min = 1.0, r_max = 100.0;
  int points = 24;
  double tsim_tol = 0.1;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline Verdict all_of(const std::vector<HypothesisItem>& items) {
  bool undetermined = false;
  for (const auto& it : items) {
    if (it.verdict == Verdict::Fails) return Verdict::Fails;
    if (it.verdict == Verdict::Undetermined) undetermined = true;
  }
  return undetermined ? Verdict::Undetermined : Verdict::Holds;
}

inline Verdict any_of(const std::vector<Verdict>& vs) {
  bool undetermined = false;
  for (auto v : vs) {
    if (v == Verdict::Holds) return Verdict::Holds;
    if (v == Verdict::Undetermined) undetermined = true;
  }
  return undetermined ? Verdict::Undetermined : Verdict::Fails;
}

/// Finite-scale order: declared metadata first, 0 for polynomials, else the
/// profile estimate.
inline std::optional<double> order_of(const EntireFunction& f, const GrowthProfile& prof, std::string* how) {
  if (f.meta.order) {
    *how = "declared";
    return *f.meta.order;
  }
  if (!models_transcendental(f)) {
    *how = "polynomial";
    return 0.0;
  }
  try {
    *how = "estimated";
    return order_estimate(prof).rho;
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline std::vector<std::uint64_t> series_exponents(const EntireFunction& f) {
  if (const auto* g = std::get_if<GapSeriesNode>(&f.node().v)) {
    std::vector<std::uint64_t> out;
    for (const auto& t : g->terms) out.push_back(t.exponent);
    return out;
  }
  return taylor_exponents(f, 64);
}

}  // namespace detail

inline HypothesisReport theorem_hypotheses_report(const EntireFunction& A, const EntireFunction& B, const HypothesisOptions& opt = {}) {
  using detail::fmt;
  HypothesisReport rep;
  const GrowthProfile profA = growth_profile(A, opt.r_min, opt.r_max, opt.points);
  const GrowthProfile profB = growth_profile(B, opt.r_min, opt.r_max, opt.points);

  auto tsim_item = [&](const char* who, const EntireFunction& f, const GrowthProfile& prof) {
    HypothesisItem it{std::string(who) + " has T ~ log M on a set of positive upper log density", Verdict::Undetermined, ""};
    try {
      const TsimReport t = tsim_check(prof, opt.tsim_tol);
      it.verdict = t.positive ? Verdict::Holds : Verdict::Fails;
      double last = t.ratios.empty() ? 0.0 : t.ratios.back().second;
      it.detail = "upper density " + fmt(t.upper_density) + ", last T/logM " + fmt(last) + (f.meta.tsim_logM ? " (declared)" : "");
    } catch (const Error& e) {
      it.detail = e.what();
    }
    return it;
  };

  // A solves w'' + P w = 0 and B has T ~ log M on a set of positive density.
  {
    TheoremCheck tc{"solution_coefficient_tsim", {}, Verdict::Undetermined};
    HypothesisItem solves{"A solves w'' + P w = 0", Verdict::Undetermined, "P not supplied"};
    if (opt.P) {
      std::vector<cplx> pts;
      for (int i = 0; i < 12; ++i) pts.push_back(std::polar(0.5 + 0.4 * i, 0.7 * i));
      const double res = residual_check(A, poly({0.0}), poly(*opt.P), pts).max_rel_residual;
      solves.verdict = res < 1e-8 ? Verdict::Holds : Verdict::Fails;
      solves.detail = "relative residual " + fmt(res);
    }
    tc.items.push_back(solves);
    tc.items.push_back({"B is transcendental", models_transcendental(B) ? Verdict::Holds : Verdict::Fails, ""});
    tc.items.push_back(tsim_item("B", B, profB));
    tc.overall = detail::all_of(tc.items);
    rep.checks.push_back(tc);
  }

  // A of non-integral order > 1 with zeros in a narrow sector, B with a
  // multiply connected Fatou component.
  {
    TheoremCheck tc{"sector_zeros_mcf", {}, Verdict::Undetermined};
    std::string how;
    const auto rho = detail::order_of(A, profA, &how);
    HypothesisItem ord{"A has finite non-integral order > 1", Verdict::Undetermined, "order not estimable"};
    if (rho) {
      const double frac = std::abs(*rho - std::round(*rho));
      ord.verdict = (*rho > 1.0 && frac > 0.1) ? Verdict::Holds : Verdict::Fails;
      ord.detail = how + " order " + fmt(*rho);
    }
    tc.items.push_back(ord);

    HypothesisItem zone{"zeros of A lie in a sector narrower than the genus bound", Verdict::Undetermined, ""};
    const auto zeros = collect_product_zeros(A);
    int p = A.meta.genus.value_or(0);
    if (const auto* pn = std::get_if<ProductNode>(&A.node().v); pn && !A.meta.genus) p = pn->genus;
    const double bound = (p % 2 == 1 || p == 0) ? kPi / (p + 1) : (2.0 * p - 1) * kPi / (2.0 * p * (p + 1));
    if (zeros.empty()) {
      zone.verdict = Verdict::Holds;
      zone.detail = "no product zeros";
    } else {
      // smallest arc containing all arguments
      std::vector<double> args;
      for (const auto& z : zeros) args.push_back(normalize_angle_positive(z.arg));
      std::sort(args.begin(), args.end());
      double gap = kTwoPi - (args.back() - args.front());
      for (std::size_t i = 1; i < args.size(); ++i) gap = std::max(gap, args[i] - args[i - 1]);
      const double width = kTwoPi - gap;
      zone.verdict = width < bound ? Verdict::Holds : Verdict::Fails;
      zone.detail = "width " + fmt(width) + " vs bound " + fmt(bound) + " (genus " + std::to_string(p) + ")";
    }
    tc.items.push_back(zone);
    tc.items.push_back({"B is transcendental", models_transcendental(B) ? Verdict::Holds : Verdict::Fails, ""});

    HypothesisItem mcf{"B has a multiply connected Fatou component", Verdict::Undetermined, "not declared"};
    if (B.meta.multiply_connected_fatou) {
      mcf.verdict = Verdict::Holds;
      const MinMaxReport ann = minmax_annuli_check(profB, 0.5);
      double best = 0;
      for (const auto& a : ann.annuli) best = std::max(best, a.ratio());
      mcf.detail = "declared; " + std::to_string(ann.annuli.size()) + " annuli with L >= M^0.5, largest ratio " + fmt(best);
    }
    tc.items.push_back(mcf);
    tc.overall = detail::all_of(tc.items);
    rep.checks.push_back(tc);
  }

  // B = h e^P with lambda(h) < deg P, and A with a gap, T ~ log M, or mcf.
  {
    TheoremCheck tc{"exp_poly_coefficient", {}, Verdict::Undetermined};
    HypothesisItem form{"B = h e^P with lambda(B) < rho(B) = deg P", Verdict::Fails, "B has no exponential factor, so lambda(B) = rho(B)"};
    if (const auto split = split_exp_factor(B)) {
      const int n = poly_degree(split->P);
      const auto hz = collect_product_zeros(split->h);
      double lambda = 0.0;
      std::string how = "finitely many zeros";
      if (hz.size() >= 8) {
        ZeroSequence zs;
        zs.zeros = hz;
        lambda = convergence_exponent(zs);
        how = "estimated";
      }
      form.verdict = (n >= 1 && lambda < n) ? Verdict::Holds : Verdict::Fails;
      form.detail = "lambda(h) " + fmt(lambda) + " (" + how + "), deg P " + std::to_string(n);
    }
    tc.items.push_back(form);

    std::vector<Verdict> alternatives;
    HypothesisItem gap{"A has Fabry gap", Verdict::Undetermined, ""};
    try {
      const auto ex = detail::series_exponents(A);
      const GapReport std_mode = fabry_gap_check(ex, GapMode::Standard);
      const GapReport recip_mode = fabry_gap_check(ex, GapMode::ReciprocalSum);
      gap.verdict = std_mode.verdict ? Verdict::Holds : Verdict::Fails;
      gap.detail = "standard statistic " + fmt(std_mode.statistic) + "; divergent-reciprocal-sum variant " +
                   (recip_mode.verdict ? "true" : "false") + " (slope " + fmt(recip_mode.statistic) + ")";
    } catch (const Error& e) {
      gap.detail = e.what();
    }
    alternatives.push_back(gap.verdict);
    tc.items.push_back(gap);
    const HypothesisItem ts = tsim_item("A", A, profA);
    alternatives.push_back(ts.verdict);
    tc.items.push_back(ts);
    HypothesisItem amcf{"A has a multiply connected Fatou component", A.meta.multiply_connected_fatou ? Verdict::Holds : Verdict::Undetermined,
                        A.meta.multiply_connected_fatou ? "declared" : "not declared"};
    alternatives.push_back(amcf.verdict);
    tc.items.push_back(amcf);

    const Verdict alt = detail::any_of(alternatives);
    tc.overall = detail::all_of({form, {"", alt, ""}});
    rep.checks.push_back(tc);
  }

  std::string applies;
  for (const auto& c : rep.checks)
    if (c.overall == Verdict::Holds) applies += (applies.empty() ? "" : ", ") + c.name;
  rep.summary = applies.empty() ? "no theorem applies" : "hypotheses hold: " + applies;
  rep.notes.push_back("solutions are read as solutions of f'' + A f' + B f = 0");
  return rep;
}

// ---------------------------------------------------------------------------
// Order-divergence diagnostic

struct DiagnosticRay {
  double theta = 0;
  std::vector<double> stage_orders;  // NaN where the stage has too few growing samples
  bool increasing = false;
  std::string error;
};

struct DiagnosticReport {
  cplx f0, f0p;  // initial values at the origin
  std::vector<double> schedule;
  std::vector<DiagnosticRay> rays;
  double rho_A = 0, rho_B = 0;
  double max_order = 0;
  std::string verdict;  // "order-divergent" or "bounded order"
};

struct DiagnosticOptions {
  std::optional<std::pair<cplx, cplx>> ic;  // explicit (f(0), f'(0)); otherwise seeded random
  std::uint64_t seed = 1;
  Controller ctrl{};
};

/// Uniform point of the unit disk by rejection sampling.
template <class Engine>
cplx unit_disk_point(Engine& eng) {
  for (;;) {
    const double x = 2 * uniform01(eng) - 1, y = 2 * uniform01(eng) - 1;
    if (x * x + y * y < 1) return {x, y};
  }
}

inline DiagnosticReport infinite_order_diagnostic(const EntireFunction& A, const EntireFunction& B, const std::vector<double>& rays,
                                                  std::vector<double> schedule, const DiagnosticOptions& opt = {}) {
  if (rays.size() < 3) throw DomainError("infinite_order_diagnostic: need at least 3 rays");
  if (schedule.size() < 3) throw DomainError("infinite_order_diagnostic: need at least 3 schedule stages");
  std::sort(schedule.begin(), schedule.end());
  if (!(schedule.front() > 0)) throw DomainError("infinite_order_diagnostic: schedule radii must be positive");

  DiagnosticReport rep;
  rep.schedule = schedule;
  if (opt.ic) {
    rep.f0 = opt.ic->first;
    rep.f0p = opt.ic->second;
  } else {
    std::mt19937_64 eng(opt.seed);
    rep.f0 = unit_disk_point(eng);
    rep.f0p = unit_disk_point(eng);
  }
  const ScaledState s0 = make_state(rep.f0, rep.f0p, opt.ctrl.renorm_log);

  auto order_of = [](const EntireFunction& f) {
    if (f.meta.order) return *f.meta.order;
    if (!models_transcendental(f)) return 0.0;
    return order_estimate(growth_profile(f, 1.0, 100.0, 24)).rho;
  };
  rep.rho_A = order_of(A);
  rep.rho_B = order_of(B);

  rep.rays = parallel_map<DiagnosticRay>(rays.size(), [&](std::size_t i) {
    DiagnosticRay dr;
    dr.theta = rays[i];
    try {
      const PathResult res = integrate_path(A, B, Path::ray(dr.theta), s0, 0.0, schedule.back(), opt.ctrl);
      const RaySolution full = to_ray_solution(dr.theta, res, opt.ctrl);
      for (double rm : schedule) {
        RaySolution part = full;
        part.samples.clear();
        for (const auto& s : full.samples)
          if (s.r <= rm * (1 + 1e-12)) part.samples.push_back(s);
        double order = std::numeric_limits<double>::quiet_NaN();
        try {
          const auto w = solution_order_windows(part);
          if (!w.windows.empty()) order = w.final_order;
        } catch (const DomainError&) {
        }
        dr.stage_orders.push_back(order);
      }
    } catch (const Error& e) {
      dr.error = e.what();
    }
    return dr;
  });

  const double bar = rep.rho_A + rep.rho_B + 1.0;
  bool divergent = false, any_ok = false;
  for (auto& dr : rep.rays) {
    if (!dr.error.empty()) continue;
    any_ok = true;
    int run = 1;
    for (std::size_t k = 0; k < dr.stage_orders.size(); ++k) {
      const double o = dr.stage_orders[k];
      if (std::isfinite(o)) rep.max_order = std::max(rep.max_order, o);
      if (k > 0 && std::isfinite(o) && std::isfinite(dr.stage_orders[k - 1]) && o > dr.stage_orders[k - 1] + 0.01)
        ++run;
      else
        run = 1;
      if (run >= 3) dr.increasing = true;
    }
    double top = 0;
    for (double o : dr.stage_orders)
      if (std::isfinite(o)) top = std::max(top, o);
    if (dr.increasing && top > bar) divergent = true;
  }
  if (!any_ok) throw NumericalError("infinite_order_diagnostic: integration failed on every ray");
  rep.verdict = divergent ? "order-divergent" : "bounded order";
  return rep;
}

}  // namespace growthlab
