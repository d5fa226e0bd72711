#pragma once

// CSV and JSON encodings of profiles, ray samples and reports. Both formats
// carry schema_version 1; floats in CSV use 17 significant digits.

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "growthlab/experiments.hpp"
#include "growthlab/growth.hpp"
#include "growthlab/hille.hpp"
#include "growthlab/hypotheses.hpp"
#include "growthlab/ode.hpp"

namespace growthlab::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Finite doubles stay numbers; inf and nan become strings so nothing is lost.
inline json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

inline void write_profile_csv(std::ostream& os, const GrowthProfile& p) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "r,logM,thetaM,logL,thetaL,T\n";
  for (const auto& r : p.rows)
    os << num(r.r) << ',' << num(r.logM) << ',' << num(r.thetaM) << ',' << num(r.logL) << ',' << num(r.thetaL) << ',' << num(r.T) << '\n';
}

inline void write_ray_csv(std::ostream& os, const RaySolution& s) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "r,logf,argf,logfp,argfp,renorms\n";
  for (const auto& x : s.samples)
    os << num(x.r) << ',' << num(x.logf) << ',' << num(x.argf) << ',' << num(x.logfp) << ',' << num(x.argfp) << ',' << x.renorms << '\n';
}

inline json to_json(const GrowthProfile& p) {
  json rows = json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"r", jnum(r.r)}, {"logM", jnum(r.logM)}, {"thetaM", jnum(r.thetaM)}, {"logL", jnum(r.logL)}, {"thetaL", jnum(r.thetaL)}, {"T", jnum(r.T)}});
  return rows;
}

inline json to_json(const OrderEstimate& e) {
  json w = json::array();
  for (const auto& x : e.windows) w.push_back({{"r_lo", jnum(x.r_lo)}, {"r_hi", jnum(x.r_hi)}, {"slope", jnum(x.slope)}, {"rms", jnum(x.rms)}});
  return {{"rho", jnum(e.rho)}, {"mu", jnum(e.mu)}, {"window", e.window}, {"residual", jnum(e.residual)}, {"windows", w}};
}

inline json to_json(const RadiusSet& s) {
  json a = json::array();
  for (const auto& [lo, hi] : s.intervals) a.push_back({jnum(lo), jnum(hi)});
  return a;
}

inline json to_json(const TsimReport& t) {
  json ratios = json::array();
  for (const auto& [r, q] : t.ratios) ratios.push_back({{"r", jnum(r)}, {"ratio", jnum(q)}});
  return {{"verdict", t.positive}, {"upper_density", jnum(t.upper_density)}, {"qualifying", to_json(t.qualifying)}, {"ratios", ratios}};
}

inline json to_json(const SectorSet& s) {
  json t = json::array();
  for (double x : s.thetas) t.push_back(jnum(x));
  return {{"degree", s.degree}, {"width", jnum(s.width())}, {"thetas", t}};
}

inline json to_json(const SectorVerdict& v) {
  return {{"j", v.j},
          {"kind", v.kind == SectorKind::BlowUp ? "BlowUp" : "Decay"},
          {"exponent", jnum(v.exponent)},
          {"fit_residual", jnum(v.fit_residual)},
          {"wronskian", jnum(v.wronskian)}};
}

inline json to_json(const ZeroCount& c) {
  return {{"count", c.count}, {"raw", jnum(c.raw)}, {"distance", jnum(c.distance)}, {"radius", jnum(c.radius)}, {"retries", c.retries}};
}

inline json to_json(const RaySolution& s) {
  json rows = json::array();
  for (const auto& x : s.samples)
    rows.push_back({{"r", jnum(x.r)}, {"logf", jnum(x.logf)}, {"argf", jnum(x.argf)}, {"logfp", jnum(x.logfp)}, {"argfp", jnum(x.argfp)}, {"renorms", x.renorms}});
  return {{"theta", jnum(s.theta)}, {"renorm_count", s.renorm_count}, {"samples", rows}};
}

inline json to_json(const HypothesisReport& h) {
  json checks = json::array();
  for (const auto& c : h.checks) {
    json items = json::array();
    for (const auto& it : c.items) items.push_back({{"name", it.name}, {"verdict", to_string(it.verdict)}, {"detail", it.detail}});
    checks.push_back({{"name", c.name}, {"verdict", to_string(c.overall)}, {"items", items}});
  }
  return {{"checks", checks}, {"summary", h.summary}, {"notes", h.notes}};
}

inline json to_json(const DiagnosticReport& d) {
  json rays = json::array();
  for (const auto& r : d.rays) {
    json orders = json::array();
    for (double o : r.stage_orders) orders.push_back(jnum(o));
    json ray = {{"theta", jnum(r.theta)}, {"stage_orders", orders}, {"increasing", r.increasing}};
    if (!r.error.empty()) ray["error"] = r.error;
    rays.push_back(ray);
  }
  json sched = json::array();
  for (double s : d.schedule) sched.push_back(jnum(s));
  return {{"ic", {{"f0", {jnum(d.f0.real()), jnum(d.f0.imag())}}, {"f0p", {jnum(d.f0p.real()), jnum(d.f0p.imag())}}}},
          {"schedule", sched},
          {"rho_A", jnum(d.rho_A)},
          {"rho_B", jnum(d.rho_B)},
          {"max_order", jnum(d.max_order)},
          {"rays", rays},
          {"verdict", d.verdict}};
}

inline json to_json(const ExampleReport& e) {
  json eqs = json::array();
  for (const auto& q : e.equations) {
    json j = {{"label", q.label}, {"A", q.A}, {"B", q.B}, {"solution", q.solution}, {"residual", jnum(q.residual)}};
    if (!q.residual_notes.empty()) j["residual_notes"] = q.residual_notes;
    if (!q.error.empty()) j["error"] = q.error;
    eqs.push_back(j);
  }
  json checks = json::object();
  for (const auto& [k, v] : e.checks) checks[k] = v;
  return {{"schema_version", kSchemaVersion},
          {"id", e.id},
          {"equations", eqs},
          {"claimed_solution", e.equations.empty() ? "" : e.equations.front().solution},
          {"residual", jnum(e.residual)},
          {"order_estimate", jnum(e.order_estimate)},
          {"order_residual", jnum(e.order_residual)},
          {"checks", checks},
          {"hypotheses", to_json(e.hypotheses)},
          {"failing_hypothesis", e.failing_hypothesis},
          {"notes", e.notes}};
}

/// Fixed-width text table of an example report.
inline void write_example_table(std::ostream& os, const ExampleReport& e) {
  char buf[256];
  os << "example " << e.id << "\n";
  for (const auto& q : e.equations) {
    std::snprintf(buf, sizeof buf, "  %-18s residual %-12.4g", q.label.c_str(), q.residual);
    os << buf << "A=" << q.A << "  B=" << q.B << "  f=" << q.solution << "\n";
    if (!q.error.empty()) os << "    error: " << q.error << "\n";
  }
  std::snprintf(buf, sizeof buf, "  order estimate    %.4f (window RMS %.3g)\n", e.order_estimate, e.order_residual);
  os << buf;
  for (const auto& [k, v] : e.checks) os << "  " << k << ": " << v << "\n";
  for (const auto& c : e.hypotheses.checks) os << "  " << c.name << ": " << to_string(c.overall) << "\n";
  os << "  summary: " << e.hypotheses.summary << "\n";
  os << "  failing hypothesis: " << e.failing_hypothesis << "\n";
  for (const auto& n : e.notes) os << "  note: " << n << "\n";
}

}  // namespace growthlab::io
