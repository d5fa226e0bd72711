#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "growthlab/hypotheses.hpp"
#include "growthlab/parse.hpp"

using namespace growthlab;

namespace {

const char* kExp = "exp(poly(0,1))";

const TheoremCheck& check(const HypothesisReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

Verdict item(const TheoremCheck& c, const std::string& prefix) {
  for (const auto& i : c.items)
    if (i.name.rfind(prefix, 0) == 0) return i.verdict;
  throw std::runtime_error("missing item " + prefix);
}

// sum_{k=1}^{8} z^{k^2} / (k^2)!
std::string factorial_gap_series() {
  std::string s = "gapseries(";
  for (int k = 1; k <= 8; ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%d:%.17g", k > 1 ? "," : "", k * k, std::exp(-std::lgamma(k * k + 1.0)));
    s += buf;
  }
  return s + ")";
}

}  // namespace

TEST(Hypotheses, ExponentialPairMeetsNoTheorem) {
  HypothesisOptions o;
  o.P = std::vector<cplx>{-1.0};
  const auto r = theorem_hypotheses_report(parse_spec("neg(exp(poly(0,1)))"), parse_spec(kExp), o);
  EXPECT_EQ(r.summary, "no theorem applies");
  const auto& t = check(r, "solution_coefficient_tsim");
  EXPECT_EQ(item(t, "A solves"), Verdict::Holds);
  EXPECT_EQ(item(t, "B has T ~ log M"), Verdict::Fails);
  EXPECT_EQ(t.overall, Verdict::Fails);
}

TEST(Hypotheses, MissingFabryGapIsReported) {
  const auto r = theorem_hypotheses_report(parse_spec("sum(exp(poly(0,1)),poly(-1))"), parse_spec(kExp));
  const auto& e = check(r, "exp_poly_coefficient");
  EXPECT_EQ(item(e, "B = h e^P"), Verdict::Holds);
  EXPECT_EQ(item(e, "A has Fabry gap"), Verdict::Fails);
  EXPECT_NE(e.overall, Verdict::Holds);
}

TEST(Hypotheses, LowOrderProductFailsSectorTheorem) {
  const auto r = theorem_hypotheses_report(parse_spec("prod(poly(0,0,0,1),baker(1,8))"),
                                           parse_spec("prod(poly(0,0,-1),baker(1,8))@{mcf}"));
  const auto& s = check(r, "sector_zeros_mcf");
  EXPECT_EQ(item(s, "A has finite non-integral order"), Verdict::Fails);
  EXPECT_EQ(item(s, "B has a multiply connected"), Verdict::Holds);
  EXPECT_EQ(s.overall, Verdict::Fails);
}

TEST(Hypotheses, GapSeriesWithExponentialHolds) {
  const auto r = theorem_hypotheses_report(parse_spec("gapseries(1:1,4:0.5,9:0.1,16:0.01,25:0.001,36:1e-4,49:1e-5,64:1e-6)"),
                                           parse_spec(kExp));
  EXPECT_EQ(check(r, "exp_poly_coefficient").overall, Verdict::Holds);
  EXPECT_EQ(r.summary, "hypotheses hold: exp_poly_coefficient");
}

TEST(Hypotheses, OscillatorWithProductHolds) {
  HypothesisOptions o;
  o.P = std::vector<cplx>{1.0};
  const auto r = theorem_hypotheses_report(parse_spec("exp(poly(0,(0,1)))"), parse_spec("baker(1,8)"), o);
  EXPECT_EQ(check(r, "solution_coefficient_tsim").overall, Verdict::Holds);
}

TEST(Hypotheses, UndeclaredFatouComponentIsUndetermined) {
  const auto r = theorem_hypotheses_report(parse_spec(kExp), parse_spec(kExp));
  EXPECT_EQ(item(check(r, "sector_zeros_mcf"), "B has a multiply connected"), Verdict::Undetermined);
}

TEST(Diagnostic, GapSeriesCoefficientIsOrderDivergent) {
  const auto d = infinite_order_diagnostic(parse_spec(kExp), parse_spec(factorial_gap_series()), {2.5, 3.0, 3.5, 4.0},
                                           {5, 7, 9, 11});
  EXPECT_EQ(d.verdict, "order-divergent");
  const double bar = d.rho_A + d.rho_B + 1;
  bool witnessed = false;
  for (const auto& ray : d.rays) {
    EXPECT_TRUE(ray.error.empty()) << ray.error;
    ASSERT_EQ(ray.stage_orders.size(), 4u);
    if (ray.increasing && ray.stage_orders.back() > bar) witnessed = true;
  }
  EXPECT_TRUE(witnessed);
  EXPECT_GT(d.max_order, bar);
}

TEST(Diagnostic, ExponentialPairHasBoundedOrder) {
  DiagnosticOptions o;
  o.ic = std::pair<cplx, cplx>{0.0, 1.0};
  const auto d = infinite_order_diagnostic(parse_spec("neg(exp(poly(0,1)))"), parse_spec(kExp), {-0.5, -0.45, 0.45, 0.5},
                                           {4, 5.5, 7, 8.5}, o);
  EXPECT_EQ(d.verdict, "bounded order");
  EXPECT_EQ(d.f0, cplx(0.0));
  EXPECT_EQ(d.f0p, cplx(1.0));
  for (const auto& ray : d.rays) {
    EXPECT_FALSE(ray.increasing);
    for (double o : ray.stage_orders) EXPECT_NEAR(o, 1.0, 0.1) << "theta " << ray.theta;
  }
}

TEST(Diagnostic, PolynomialCoefficientWindowsApproachClassicalOrder) {
  // A = 0, B = -z^n: solutions have order (n + 2) / 2
  struct Case {
    const char* B;
    int n;
    std::vector<double> schedule;
  };
  for (const auto& c : {Case{"poly(-1)", 0, {10, 20, 40}}, Case{"poly(0,-1)", 1, {8, 12, 16}}, Case{"poly(0,0,-1)", 2, {8, 11, 14}}}) {
    DiagnosticOptions o;
    o.seed = 5;
    const auto d = infinite_order_diagnostic(parse_spec("poly(0)"), parse_spec(c.B), {0.3, 1.0, 2.0, 3.0}, c.schedule, o);
    EXPECT_EQ(d.verdict, "bounded order") << c.B;
    const double want = (c.n + 2) / 2.0;
    int finite = 0;
    for (const auto& ray : d.rays) {
      const double last = ray.stage_orders.back();
      if (!std::isfinite(last)) continue;
      ++finite;
      EXPECT_NEAR(last, want, 0.15) << c.B << " theta " << ray.theta;
      EXPECT_FALSE(ray.increasing) << c.B << " theta " << ray.theta;
    }
    EXPECT_GE(finite, 3) << c.B;
  }
}

TEST(Diagnostic, SeededInitialValuesAreReproducible) {
  DiagnosticOptions o;
  o.seed = 99;
  const std::vector<double> rays{0.0, 1.0, 2.0}, sched{5, 10, 20};
  const auto a = infinite_order_diagnostic(parse_spec("poly(0)"), parse_spec("poly(1)"), rays, sched, o);
  const auto b = infinite_order_diagnostic(parse_spec("poly(0)"), parse_spec("poly(1)"), rays, sched, o);
  EXPECT_EQ(a.f0, b.f0);
  EXPECT_EQ(a.f0p, b.f0p);
  EXPECT_LE(std::abs(a.f0), 1.0);
  ASSERT_EQ(a.rays.size(), b.rays.size());
  for (std::size_t i = 0; i < a.rays.size(); ++i) {
    ASSERT_EQ(a.rays[i].stage_orders.size(), b.rays[i].stage_orders.size());
    for (std::size_t k = 0; k < a.rays[i].stage_orders.size(); ++k) {
      const double x = a.rays[i].stage_orders[k], y = b.rays[i].stage_orders[k];
      EXPECT_TRUE((std::isnan(x) && std::isnan(y)) || x == y);
    }
  }
  EXPECT_EQ(a.verdict, "bounded order");
}

TEST(Diagnostic, RejectsShortInputs) {
  const auto z = parse_spec("poly(0)");
  EXPECT_THROW(infinite_order_diagnostic(z, z, {0.0, 1.0}, {1, 2, 3}), DomainError);
  EXPECT_THROW(infinite_order_diagnostic(z, z, {0.0, 1.0, 2.0}, {1, 2}), DomainError);
  EXPECT_THROW(infinite_order_diagnostic(z, z, {0.0, 1.0, 2.0}, {0, 2, 3}), DomainError);
}
