#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cgeem/convergence.hpp"
#include "cgeem/errors.hpp"

using namespace cgeem;
using namespace cgeem::convergence;

namespace {

estimator::EstimatorTrace constant_trace(const Eigen::VectorXd& theta, std::size_t n) {
  estimator::EstimatorTrace t;
  t.param_names = aero::param_names(aero::DragModel::kPolar);
  t.theta.assign(n, theta);
  t.residual.assign(n, aero::Measurement::Zero());
  t.gain_norm.assign(n, 1.0);
  t.condition.assign(n, 1.0);
  return t;
}

}  // namespace

TEST(Window, SixtyFortySplit) {
  auto w = convergence_window(100);
  EXPECT_EQ(w.start, 60u);
  EXPECT_EQ(w.end, 100u);
  w = convergence_window(50);
  EXPECT_EQ(w.start, 30u);
  EXPECT_EQ(w.end, 50u);
  w = convergence_window(51);
  EXPECT_EQ(w.start, 31u);
  EXPECT_EQ(w.end, 51u);
  EXPECT_EQ(convergence_window(201).start, 121u);
  EXPECT_THROW(convergence_window(49), ConfigError);
}

TEST(Window, StartIsCeilOfSixtyPercent) {
  for (std::size_t n = 50; n < 2000; ++n) {
    EXPECT_EQ(convergence_window(n).start, static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(n) - 1e-9)))
        << n;
  }
}

TEST(Cv, HandValues) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_DOUBLE_EQ(coefficient_of_variation(a), 0.5);
  const std::vector<double> c(10, 4.2);
  EXPECT_EQ(coefficient_of_variation(c), 0.0);
}

TEST(Cv, NegationSymmetry) {
  const std::vector<double> a{1.5, 2.0, 3.7, 2.2};
  std::vector<double> b;
  for (double v : a) b.push_back(-v);
  EXPECT_EQ(coefficient_of_variation(a), coefficient_of_variation(b));
}

TEST(Cv, ScaleInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(3.0, 0.4);
  std::vector<double> a(200);
  for (auto& v : a) v = n(rng);
  const double base = coefficient_of_variation(a);
  for (double k : {1e-6, 0.3, 7.0, 1e5}) {
    std::vector<double> b;
    for (double v : a) b.push_back(k * v);
    EXPECT_NEAR(coefficient_of_variation(b), base, 1e-12 * base) << k;
  }
}

TEST(Cv, DegenerateMeanAndShortSeries) {
  const std::vector<double> z{-1.0, 1.0};
  EXPECT_THROW(coefficient_of_variation(z), DegenerateError);
  const std::vector<double> one{1.0};
  EXPECT_THROW(coefficient_of_variation(one), ConfigError);
}

TEST(Cv, MonotoneInNoiseAmplitude) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n(0.0, 1.0);
  double prev = -1.0;
  for (double amp : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2}) {
    std::vector<double> cvs;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> s(80);
      for (auto& v : s) v = 1.0 + amp * n(rng);
      cvs.push_back(coefficient_of_variation(s));
    }
    std::nth_element(cvs.begin(), cvs.begin() + 50, cvs.end());
    EXPECT_GE(cvs[50], prev) << amp;
    prev = cvs[50];
  }
}

TEST(Assess, ConstantTraceConverges) {
  const Eigen::VectorXd theta = aero::AeroParameters::a321_reference().to_vector();
  const auto r = assess(constant_trace(theta, 100));
  EXPECT_TRUE(r.converged);
  ASSERT_TRUE(r.representative.has_value());
  EXPECT_EQ(*r.representative, theta);
  EXPECT_EQ(r.window.start, 60u);
  EXPECT_TRUE(r.failing().empty());
  for (const auto& p : r.params) {
    EXPECT_EQ(p.cv, 0.0);
    EXPECT_TRUE(p.pass);
  }
}

TEST(Assess, TieredThresholds) {
  const auto r = assess(constant_trace(Eigen::VectorXd::Ones(6), 100));
  EXPECT_EQ(r.at("C_L0").threshold, 0.01);
  EXPECT_EQ(r.at("C_Lalpha").threshold, 0.01);
  EXPECT_EQ(r.at("C_LM").threshold, 0.01);
  EXPECT_EQ(r.at("C_D0").threshold, 0.10);
  EXPECT_EQ(r.at("C_DL").threshold, 0.10);
  EXPECT_EQ(r.at("C_TV").threshold, 0.01);
  const auto groups = parameter_groups(aero::DragModel::kLinear);
  ASSERT_EQ(groups.size(), 7u);
  EXPECT_EQ(groups[5], ParamGroup::kDrag);
  EXPECT_EQ(groups[6], ParamGroup::kThrust);
}

TEST(Assess, TwelvePercentDragCvIsFlagged) {
  auto t = constant_trace(Eigen::VectorXd::Ones(6), 100);
  // alternating window values with CV near 12%
  for (std::size_t k = 60; k < 100; ++k) t.theta[k][3] = (k % 2 == 0) ? 1.12 : 0.88;
  const auto r = assess(t);
  EXPECT_NEAR(r.at("C_D0").cv, 0.12 * std::sqrt(40.0 / 39.0), 1e-12);
  EXPECT_FALSE(r.at("C_D0").pass);
  EXPECT_TRUE(r.at("C_DL").pass);
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.representative.has_value());
  EXPECT_EQ(r.failing(), std::vector<std::string>{"C_D0"});
}

TEST(Assess, BurnInIsIgnored) {
  auto t = constant_trace(Eigen::VectorXd::Ones(6), 100);
  for (std::size_t k = 0; k < 60; ++k) t.theta[k] *= static_cast<double>(k);
  EXPECT_TRUE(assess(t).converged);
}

TEST(Assess, DegenerateParameterIsFlaggedNotThrown) {
  Eigen::VectorXd theta = Eigen::VectorXd::Ones(6);
  theta[4] = 0.0;
  const auto r = assess(constant_trace(theta, 100));
  EXPECT_TRUE(r.at("C_DL").degenerate);
  EXPECT_FALSE(r.at("C_DL").pass);
  EXPECT_TRUE(std::isinf(r.at("C_DL").cv));
  EXPECT_FALSE(r.converged);
}

TEST(Assess, PassMeansBelowThreshold) {
  auto t = constant_trace(Eigen::VectorXd::Ones(6), 100);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& th : t.theta) th += 0.02 * Eigen::VectorXd::NullaryExpr(6, [&] { return n(rng); });
  const auto r = assess(t);
  for (const auto& p : r.params) {
    EXPECT_GE(p.cv, 0.0);
    EXPECT_EQ(p.pass, p.cv < p.threshold) << p.name;
  }
  const auto again = assess(t);
  for (std::size_t i = 0; i < r.params.size(); ++i) EXPECT_EQ(r.params[i].cv, again.params[i].cv);
}
