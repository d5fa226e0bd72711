#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "growthlab/experiments.hpp"
#include "growthlab/io.hpp"

using namespace growthlab;

TEST(Examples, ExponentialPairHasOrderOneSolution) {
  const auto r = run_example('a');
  EXPECT_LT(r.residual, 1e-10);
  EXPECT_NEAR(r.order_estimate, 1.0, 0.05);
  EXPECT_FALSE(r.failing_hypothesis.empty());
  EXPECT_EQ(r.hypotheses.summary, "no theorem applies");
}

TEST(Examples, ResidualOracleForExponentialPair) {
  // f = e^z - 1, A = -e^z, B = e^z: every term in plain arithmetic
  for (cplx z : {cplx(0.3, 1.1), cplx(-2.0, 0.5), cplx(4.0, -3.0)}) {
    const cplx e = std::exp(z);
    const cplx lhs = e + (-e) * e + e * (e - 1.0);
    EXPECT_LE(std::abs(lhs), 1e-12 * std::abs(e * e));
  }
}

TEST(Examples, PrintedSecondExampleIsFlagged) {
  const auto r = run_example('b');
  ASSERT_EQ(r.equations.size(), 2u);
  // f'' + (e^z - 1) f' + e^z f = 2 e^{2z} against terms of size e^{2z}
  EXPECT_NEAR(r.equations[0].residual, 2.0, 1e-9);
  EXPECT_EQ(r.equations[1].label, "sign-corrected");
  EXPECT_LT(r.equations[1].residual, 1e-12);
  EXPECT_NEAR(r.order_estimate, 1.0, 0.05);
  EXPECT_FALSE(r.notes.empty());
  EXPECT_FALSE(r.failing_hypothesis.empty());
}

TEST(Examples, ProductPairsHaveLinearSolution) {
  for (char id : {'c', 'd'}) {
    const auto r = run_example(id);
    EXPECT_LT(r.residual, 1e-12) << id;
    EXPECT_LT(r.order_estimate, 0.1) << id;
    EXPECT_FALSE(r.failing_hypothesis.empty()) << id;
    ASSERT_EQ(r.equations.size(), 2u);
    EXPECT_LT(std::abs(r.equations[0].residual - r.equations[1].residual), 1e-10) << id;
  }
}

TEST(Examples, ProductPairsWithLargerConstant) {
  for (char id : {'c', 'd'}) EXPECT_LT(run_example(id, 2.5).residual, 1e-12) << id;
}

TEST(Examples, AnnulusCheckIsReported) {
  const auto r = run_example('c');
  bool found = false;
  for (const auto& [k, v] : r.checks)
    if (k == "annuli(A)") found = v.find("annuli") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Examples, UnknownIdIsAnError) { EXPECT_THROW(run_example('e'), DomainError); }

TEST(Examples, JsonIsByteIdenticalAcrossRuns) {
  for (char id : {'a', 'b', 'c', 'd'}) {
    const std::string x = io::to_json(run_example(id)).dump(2);
    const std::string y = io::to_json(run_example(id)).dump(2);
    EXPECT_EQ(x, y) << id;
    EXPECT_NE(x.find("\"schema_version\": 1"), std::string::npos);
  }
}

TEST(Examples, TableNamesFailingHypothesis) {
  std::ostringstream os;
  io::write_example_table(os, run_example('d'));
  EXPECT_NE(os.str().find("failing hypothesis: "), std::string::npos);
  EXPECT_NE(os.str().find("order(A)"), std::string::npos);
}
