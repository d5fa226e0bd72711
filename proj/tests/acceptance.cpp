// Acceptance suite: one PASS/FAIL line per criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/airy.hpp>

#include "growthlab/growthlab.hpp"

using namespace growthlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Collects failures with short reasons; the first few end up in the detail line.
struct Tally {
  int checks = 0;
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    if (failures.empty()) return {true, summary};
    std::string d = std::to_string(failures.size()) + "/" + std::to_string(checks) + " failed: " + failures.front();
    if (failures.size() > 1) d += "; " + failures[1];
    return {false, d};
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const char* kEz = "exp(poly(0,1))";
const std::vector<double> kRadii{1.0, 3.16, 10.0, 31.6, 100.0};

Outcome characteristic_of_exponential() {
  const auto f = parse_spec(kEz);
  Tally t;
  double worst = 0;
  const auto start = std::chrono::steady_clock::now();
  for (double r : kRadii) {
    const double q = growth_row(f, r).T * kPi / r;
    worst = std::max(worst, std::abs(q - 1));
    t.expect(q >= 0.999 && q <= 1.001, "T pi/r = " + fmt("%.6f", q) + " at r = " + fmt("%g", r));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.expect(secs < 5.0, "runtime " + fmt("%.2f", secs) + " s");
  return t.outcome("max |T pi/r - 1| = " + fmt("%.2e", worst) + ", " + fmt("%.3f", secs) + " s");
}

Outcome max_modulus_of_exponential() {
  const auto f = parse_spec(kEz);
  Tally t;
  double worst = 0;
  for (double r : kRadii) {
    const double err = std::abs(max_modulus(f, r).logmod - r);
    worst = std::max(worst, err);
    t.expect(err < 1e-9, "logM error " + fmt("%.2e", err) + " at r = " + fmt("%g", r));
  }
  return t.outcome("max error " + fmt("%.2e", worst));
}

Outcome worked_examples() {
  Tally t;
  const auto a = run_example('a');
  t.expect(a.residual < 1e-10, "(a) residual " + fmt("%.2e", a.residual));
  t.expect(std::abs(a.order_estimate - 1) <= 0.05, "(a) order " + fmt("%.4f", a.order_estimate));
  const auto b = run_example('b');
  t.expect(std::abs(b.equations[0].residual - 2) < 1e-6, "(b) stated residual " + fmt("%.4g", b.equations[0].residual));
  t.expect(b.equations.size() > 1 && b.equations[1].residual < 1e-12, "(b) corrected residual");
  std::string cd;
  for (char id : {'c', 'd'}) {
    const auto r = run_example(id);
    t.expect(r.residual < 1e-12, std::string("(") + id + ") residual " + fmt("%.2e", r.residual));
    t.expect(r.order_estimate < 0.1, std::string("(") + id + ") order " + fmt("%.4f", r.order_estimate));
    cd += std::string(", (") + id + ") " + fmt("%.1e", r.residual) + " / " + fmt("%.3f", r.order_estimate);
  }
  return t.outcome("(a) " + fmt("%.1e", a.residual) + " / " + fmt("%.3f", a.order_estimate) + ", (b) stated " +
                   fmt("%.3g", b.equations[0].residual) + " corrected " + fmt("%.1e", b.equations[1].residual) + cd);
}

Outcome exact_initial_values_and_renormalization() {
  Tally t;
  const double r0 = 0.01;
  const auto A = parse_spec("neg(exp(poly(0,1)))"), B = parse_spec(kEz);
  std::vector<double> radii;
  for (int k = 1; k <= 40; ++k) radii.push_back(0.25 * k);
  const auto sol = ray_integrate(A, B, 0.0, r0, 10.0, std::expm1(r0), std::exp(r0), {}, &radii);
  double first_bad = -1, worst = 0;
  for (const auto& s : sol.samples) {
    const double want = std::log(std::expm1(s.r));
    const double rel = std::abs(s.logf - want) / std::max(1.0, std::abs(want));
    worst = std::max(worst, rel);
    if (rel > 1e-6 && first_bad < 0) first_bad = s.r;
  }
  t.expect(first_bad < 0, "closed form lost at r = " + fmt("%g", first_bad) + " (max rel error " + fmt("%.2e", worst) + ")");

  Controller a, b;
  a.renorm_log = 200;
  b.renorm_log = 100;
  const auto ea = ray_integrate(parse_spec("poly(0)"), parse_spec("poly(-1)"), 0.0, r0, 500.0, std::exp(r0), std::exp(r0), a);
  const auto eb = ray_integrate(parse_spec("poly(0)"), parse_spec("poly(-1)"), 0.0, r0, 500.0, std::exp(r0), std::exp(r0), b);
  const double delta = std::abs(ea.samples.back().logf - eb.samples.back().logf);
  t.expect(delta < 1e-8, "renormalization delta " + fmt("%.2e", delta));
  return t.outcome("closed form to r = 10, renormalization delta " + fmt("%.1e", delta));
}

Outcome sector_classification() {
  Tally t;
  {
    const std::vector<cplx> P{-1.0};
    const auto s = hille_sectors(P);
    const auto right = classify_sector(P, 1.0, 1.0, s.sector_containing(0.0));
    const auto left = classify_sector(P, 1.0, 1.0, s.sector_containing(kPi));
    t.expect(right.kind == SectorKind::BlowUp, "e^z not BlowUp around 0");
    t.expect(left.kind == SectorKind::Decay, "e^z not Decay around pi");
    t.expect(std::abs(right.exponent - 1) <= 0.15 && std::abs(left.exponent - 1) <= 0.15,
             "exponents " + fmt("%.3f", right.exponent) + ", " + fmt("%.3f", left.exponent));
  }
  std::mt19937_64 eng(2024);
  std::normal_distribution<double> g;
  int tried = 0;
  for (int i = 0; i < 6; ++i) {
    const int n = i % 4;
    std::vector<cplx> P(n + 1);
    for (auto& c : P) c = {g(eng), g(eng)};
    P[n] *= 2.0 / std::abs(P[n]);
    const auto s = hille_sectors(P);
    const int m = static_cast<int>(s.thetas.size());
    std::vector<std::pair<cplx, cplx>> ics{{{g(eng), g(eng)}, {g(eng), g(eng)}}};
    for (int j = 0; j < m; ++j) {
      const auto sub = subdominant_solution(P, s, j, detail::default_sector_rmax(s.degree));
      const double shift = std::max(sub.end.log_f().logmod, sub.end.log_fp().logmod);
      ics.emplace_back(sub.end.log_f().shifted(-shift).to_complex(), sub.end.log_fp().shifted(-shift).to_complex());
    }
    for (const auto& [w0, w0p] : ics) {
      ++tried;
      std::vector<SectorKind> kinds(m);
      for (int j = 0; j < m; ++j) kinds[j] = classify_sector(P, w0, w0p, j).kind;
      for (int j = 0; j < m; ++j)
        t.expect(!(kinds[j] == SectorKind::Decay && kinds[(j + 1) % m] == SectorKind::Decay),
                 "adjacent Decay, degree " + std::to_string(n) + " sectors " + std::to_string(j));
    }
  }
  return t.outcome("e^z BlowUp/Decay with exponent 1; no adjacent Decay over " + std::to_string(tried) + " solutions of 6 equations");
}

Outcome airy_zero_count() {
  Tally t;
  const double ai0 = boost::math::airy_ai(0.0), aip0 = boost::math::airy_ai_prime(0.0);
  const auto start = std::chrono::steady_clock::now();
  const auto c = sector_zero_count(parse_spec("poly(0)"), parse_spec("poly(0,-1)"), ai0, aip0, kPi, 0.05, 20.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int oracle = 0;
  double prev = ai0;
  for (int i = 1; i <= 200000; ++i) {
    const double v = boost::math::airy_ai(-20.0 * i / 200000);
    if ((v > 0) != (prev > 0)) ++oracle;
    prev = v;
  }
  const double formula = 2.0 / (3.0 * kPi) * std::pow(20.0, 1.5);
  t.expect(c.count == 19, "count " + std::to_string(c.count));
  t.expect(c.count == oracle, "sign-change oracle " + std::to_string(oracle));
  t.expect(std::abs(c.count - formula) <= 0.1 * formula, "formula " + fmt("%.2f", formula));
  t.expect(secs < 30.0, "runtime " + fmt("%.1f", secs) + " s");
  return t.outcome("count " + std::to_string(c.count) + ", oracle " + std::to_string(oracle) + ", formula " + fmt("%.2f", formula) +
                   ", " + fmt("%.2f", secs) + " s");
}

std::vector<cplx> ray_zeros(double power, double angle, bool alternate) {
  std::vector<cplx> z;
  for (int k = 1; k <= 200; ++k) z.push_back(std::polar(std::pow(k, power), alternate && k % 2 == 0 ? -angle : angle));
  return z;
}

Outcome lemma_battery() {
  Tally t;
  const std::vector<std::pair<int, int>> pairs{{1, 0}, {2, 0}, {2, 1}};
  struct G {
    const char* f;
    double rho, eps, r_lo;
  };
  for (const G& c : {G{kEz, 1, 0.1, 1}, G{"prod(poly(0,0,1),exp(poly(0,1)))", 1, 0.1, 1}, G{"sum(exp(poly(0,1)),poly(-1))", 1, 0.1, 1},
                     G{"poly(0,0,1)", 0, 0.5, 1}})
    t.expect(gundersen_ratio_check(parse_spec(c.f), c.rho, c.eps, pairs, geometric_grid(c.r_lo, 100, 12)).holds,
             std::string("derivative ratios fail for ") + c.f);

  for (const char* f : {kEz, "prod(poly(0,0,1),exp(poly(0,1)))", "sum(exp(poly(0,1)),poly(-1))", "poly(0,0,0,1)", "baker(1,6)"})
    t.expect(f_over_fprime_threshold(parse_spec(f), geometric_grid(1, 100, 15)) <= 1.0, std::string("min |f/f'| > r for ") + f);

  double gap_density = 1;
  for (const char* f : {"gapseries(1:1,4:1,9:1,16:1,25:1,36:1,49:1,64:1)", "gapseries(1:1,4:0.5,9:0.25,16:0.125,25:0.0625,36:0.03125)",
                        "gapseries(1:2,4:(0,1),9:-1,16:1,25:3)"}) {
    const double d = minmax_gap_check(growth_profile(parse_spec(f), 1, 1e4, 48), 0.5).upper_density;
    gap_density = std::min(gap_density, d);
    t.expect(d > 0.3, std::string("gap density ") + fmt("%.3f", d) + " for " + f);
  }

  double widest = 1e300;
  for (const char* f : {"prod(poly(0,0,1),baker(1,8))", "prod(poly(0,0,0,1),baker(1,8))", "prod(poly(0,0,1),baker(2.5,8))"}) {
    double best = 0;
    for (const auto& a : minmax_annuli_check(growth_profile(parse_spec(f), 1, 1e6, 48), 0.5).annuli) best = std::max(best, a.ratio());
    widest = std::min(widest, best);
    t.expect(best > 3, std::string("widest annulus ") + fmt("%.2f", best) + " for " + f);
  }

  struct K {
    std::vector<cplx> zeros;
    int p;
  };
  for (const K& k : {K{ray_zeros(0.4, 3 * kPi / 8, false), 2}, K{ray_zeros(0.4, 3 * kPi / 8, true), 2}, K{ray_zeros(1.0, 0.0, false), 1}})
    t.expect(kwon_min_modulus_check(product(ZeroSequence::explicit_zeros(k.zeros), k.p), 1.2, 0.05, geometric_grid(1, 100, 30))
                 .holds_past_finite_R,
             "minimum modulus bound fails, genus " + std::to_string(k.p));

  for (const char* f : {kEz, "prod(poly(0,0,1),exp(poly(0,1)))", "exp(poly(0,0,1))"})
    t.expect(bank_bound_check(parse_spec(f), geometric_grid(1, 1000, 30), 0.5).holds_past_finite_R,
             std::string("exponential bound fails for ") + f);
  return t.outcome(std::to_string(t.checks) + " checks; min gap density " + fmt("%.3f", gap_density) + ", min widest annulus " +
                   fmt("%.1f", widest));
}

Outcome order_diagnostic() {
  Tally t;
  std::string gap = "gapseries(";
  for (int k = 1; k <= 8; ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%d:%.17g", k > 1 ? "," : "", k * k, std::exp(-std::lgamma(k * k + 1.0)));
    gap += buf;
  }
  gap += ")";
  const auto div = infinite_order_diagnostic(parse_spec(kEz), parse_spec(gap), {2.5, 3.0, 3.5, 4.0}, {5, 7, 9, 11});
  t.expect(div.verdict == "order-divergent", "gap-series coefficient verdict '" + div.verdict + "'");

  DiagnosticOptions o;
  o.ic = std::pair<cplx, cplx>{0.0, 1.0};
  const auto bnd =
      infinite_order_diagnostic(parse_spec("neg(exp(poly(0,1)))"), parse_spec(kEz), {-0.5, -0.45, 0.45, 0.5}, {4, 5.5, 7, 8.5}, o);
  t.expect(bnd.verdict == "bounded order", "exponential pair verdict '" + bnd.verdict + "'");
  double lo = 1e300, hi = -1e300;
  for (const auto& ray : bnd.rays)
    for (double w : ray.stage_orders) {
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      t.expect(std::abs(w - 1) <= 0.1, "window order " + fmt("%.3f", w) + " on theta " + fmt("%.2f", ray.theta));
    }
  return t.outcome("divergent max order " + fmt("%.2f", div.max_order) + "; bounded windows in [" + fmt("%.3f", lo) + ", " +
                   fmt("%.3f", hi) + "]");
}

Outcome numerical_invariants() {
  Tally t;
  const std::vector<std::string> battery{kEz,
                                         "poly(0,0,0,0,0,1)",
                                         "sum(exp(poly(0,1)),poly(-1))",
                                         "baker(1,8)",
                                         "gapseries(1:1,4:1,9:1,16:1,25:1,36:1,49:1,64:1)",
                                         "exp(poly(0,0,1))",
                                         "prod(poly(0,0,1),exp(poly(0,1)))",
                                         "prodlist(2,(0,3),(-4,1),7;1)"};
  for (const auto& s : battery) {
    const auto f = parse_spec(s);
    const auto p = growth_profile(f, 0.5, 64, 29);  // ratio 2^{1/4}
    for (std::size_t i = 1; i + 1 < p.rows.size(); ++i)
      t.expect(p.rows[i + 1].logM - 2 * p.rows[i].logM + p.rows[i - 1].logM >= -1e-6, "convexity " + s);
    for (std::size_t i = 0; i + 4 < p.rows.size(); ++i) {
      const auto& row = p.rows[i];
      const double tol = 1e-6 * std::max(1.0, std::abs(row.logM));
      const double lp = std::max(row.logM, 0.0);
      t.expect(row.T <= lp + tol && lp <= 3 * p.rows[i + 4].T + tol, "T bracket " + s + " r = " + fmt("%g", row.r));
    }
  }

  struct Abel {
    const char* A;
    const char* B;
    double theta;
    std::function<double(double, double)> re_int;
  };
  const double r0 = 0.01;
  std::vector<double> radii;
  for (int i = 0; i < 40; ++i) radii.push_back(0.5 + 19.5 * i / 39);
  double abel = 0;
  for (const Abel& c : {Abel{"poly(0)", "poly(1)", 0.0, [](double, double) { return 0.0; }},
                        Abel{"poly(1)", "poly(1)", 0.0, [](double a, double r) { return r - a; }},
                        Abel{"neg(exp(poly(0,1)))", "exp(poly(0,1))", kPi / 2, [](double a, double r) { return std::cos(a) - std::cos(r); }},
                        Abel{"poly((0,1))", "poly(1)", 0.1, [](double a, double r) { return -std::sin(0.1) * (r - a); }}}) {
    const auto A = parse_spec(c.A), B = parse_spec(c.B);
    const auto s1 = ray_integrate(A, B, c.theta, r0, 20.0, cplx(1, 0.5), cplx(-0.3, 0.2), {}, &radii);
    const auto s2 = ray_integrate(A, B, c.theta, r0, 20.0, cplx(0.1, -1), cplx(2, 1), {}, &radii);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double v = wronskian(s1.samples[i], s2.samples[i]).logmod + c.re_int(r0, radii[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    abel = std::max(abel, hi - lo);
    t.expect(hi - lo < 1e-6, std::string("Abel drift ") + fmt("%.2e", hi - lo) + " for A = " + c.A);
  }

  const auto A = parse_spec("poly(0,1)"), B = parse_spec("poly(-1,0,-1)");
  const cplx alpha(3, -4), f0(0.2, 0.9), f0p(1.0, -0.5);
  double lin = 0;
  for (double theta : {0.0, 1.0, 2.5}) {
    const auto s1 = ray_integrate(A, B, theta, r0, 12.0, f0, f0p, {}, &radii);
    const auto s2 = ray_integrate(A, B, theta, r0, 12.0, alpha * f0, alpha * f0p, {}, &radii);
    for (std::size_t i = 0; i < s1.samples.size(); ++i)
      lin = std::max(lin, std::abs(s2.samples[i].logf - s1.samples[i].logf - std::log(5.0)));
  }
  t.expect(lin < 1e-9, "linearity shift error " + fmt("%.2e", lin));
  return t.outcome(std::to_string(t.checks) + " checks; Abel drift " + fmt("%.1e", abel) + ", linearity " + fmt("%.1e", lin));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  Tally t;
  const auto dir = fs::temp_directory_path() / ("growthlab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> configs{
      "growth --f 'exp(poly(0,1))' --rmin 1 --rmax 100 --points 12 --format csv",
      "order --f 'baker(1,8)'",
      "sectors --P 'poly(0,-1)' --ic '0.355028053887817,0;-0.258819403792807,0'",
      "solve-ray --A 'poly(0,1)' --B 'poly(1)' --ic '1,0;0,1' --rmax 8 --points 32 --format json",
      "zeros --f 'prodlist(-2,-5,(0,-3);0)' --theta 0 --eps 0.2 --r 6",
      "check-example --id c",
      "theorem-report --A 'exp(poly(0,1))' --B 'exp(poly(0,1))'",
      "diagnose --A 'poly(0)' --B 'poly(-1,0,-1)' --theta-list 0,1,2 --schedule 3,4,5 --seed 11",
  };
  int k = 0;
  for (const auto& cfg : configs) {
    std::string texts[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / ("run" + std::to_string(k) + "_" + std::to_string(run));
      const std::string cmd = std::string(GROWTHLAB_CLI_PATH) + " " + cfg + " --out " + out.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      t.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "exit status of: " + cfg);
      texts[run] = slurp(out);
    }
    t.expect(!texts[0].empty() && texts[0] == texts[1], "outputs differ for: " + cfg);
    ++k;
  }
  fs::remove_all(dir);
  return t.outcome(std::to_string(configs.size()) + " commands byte-identical across two runs");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"characteristic of e^z equals r/pi", characteristic_of_exponential},
      {"log M(r, e^z) = r", max_modulus_of_exponential},
      {"worked examples a-d", worked_examples},
      {"exact initial values and renormalization", exact_initial_values_and_renormalization},
      {"sector classification", sector_classification},
      {"Airy zero count", airy_zero_count},
      {"lemma battery", lemma_battery},
      {"order diagnostic", order_diagnostic},
      {"numerical invariants", numerical_invariants},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0, n = 0;
  for (const auto& c : criteria) {
    ++n;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %-42s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", n, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
