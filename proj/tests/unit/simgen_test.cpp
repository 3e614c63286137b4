#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cgeem/errors.hpp"
#include "cgeem/simgen.hpp"
#include "cgeem/units.hpp"

using namespace cgeem;
using namespace cgeem::simgen;

namespace {

double sample_std(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

FlightSegment constant_states(std::size_t n) {
  CruiseProfile p;
  p.v_amplitude = 0.0;
  p.alpha_amplitude_deg = 0.0;
  p.fuel_flow = 0.0;
  return synth_trajectory(static_cast<double>(n - 1), 1.0, p);
}

}  // namespace

TEST(Trajectory, SampleCountAndSpacing) {
  const auto seg = synth_trajectory(200.0, 1.0, CruiseProfile{});
  ASSERT_EQ(seg.size(), 201u);
  EXPECT_EQ(seg[0].t, 0.0);
  EXPECT_EQ(seg[200].t, 200.0);
  EXPECT_EQ(synth_trajectory(100.0, 4.0, CruiseProfile{}).size(), 401u);
}

TEST(Trajectory, ZeroAmplitudeIsConstant) {
  CruiseProfile p;
  p.v_amplitude = 0.0;
  p.alpha_amplitude_deg = 0.0;
  const auto seg = synth_trajectory(200.0, 1.0, p);
  for (const auto& s : seg.samples) {
    EXPECT_EQ(s.V, seg[0].V);
    EXPECT_EQ(s.alpha, seg[0].alpha);
    EXPECT_EQ(s.theta, seg[0].theta);
    EXPECT_EQ(s.q, 0.0);
    EXPECT_EQ(s.tat, seg[0].tat);
  }
}

TEST(Trajectory, LinearFuelBurn) {
  const CruiseProfile p;
  const auto seg = synth_trajectory(200.0, 1.0, p);
  EXPECT_NEAR(seg.samples.back().mass, p.mass0 - p.fuel_flow * 200.0, 1e-9);
  for (const auto& s : seg.samples) EXPECT_EQ(s.fuel_flow, p.fuel_flow);
}

TEST(Trajectory, PitchRateIsThetaDerivative) {
  const CruiseProfile p;
  const double h = 1e-3;
  for (double t = 0.0; t <= 200.0; t += 7.0) {
    const double fd = (p.state_at(t + h).theta - p.state_at(t - h).theta) / (2.0 * h);
    EXPECT_NEAR(p.state_at(t).q, fd, 1e-9) << t;
  }
}

TEST(Trajectory, LevelFlightHasThetaEqualAlpha) {
  const auto seg = synth_trajectory(200.0, 1.0, CruiseProfile{});
  for (const auto& s : seg.samples) {
    EXPECT_EQ(s.gamma, 0.0);
    EXPECT_EQ(s.theta, s.alpha);
    EXPECT_NEAR(s.V, s.mach * std::sqrt(1.4 * 287.05 * s.static_temp), 1e-6);
  }
}

TEST(Forces, ZeroTruthGivesZeroVerticalForce) {
  const auto seg = synth_forces(Eigen::VectorXd::Zero(6), constant_states(60), aero::AircraftConfig{});
  for (const auto& s : seg.samples) EXPECT_EQ(s.a_z, 0.0);
}

TEST(Forces, WingAreaScalesLiftPortion) {
  Eigen::VectorXd lift_only = Eigen::VectorXd::Zero(6);
  lift_only.head(3) = aero::AeroParameters::a321_reference().to_vector().head(3);
  aero::AircraftConfig a, b;
  b.wing_area = 2.0 * a.wing_area;
  const auto states = synth_trajectory(60.0, 1.0, CruiseProfile{});
  const auto sa = synth_forces(lift_only, states, a);
  const auto sb = synth_forces(lift_only, states, b);
  for (std::size_t i = 0; i < states.size(); ++i) EXPECT_NEAR(sb[i].a_z, 2.0 * sa[i].a_z, 1e-12);
}

TEST(Forces, LevelTrimAtReferenceOperatingPoint) {
  const auto seg = simulate_clean(SimScenario{});
  EXPECT_NEAR(seg[0].a_z, units::kStandardGravity, 0.05 * units::kStandardGravity);
  EXPECT_LT(std::abs(seg[0].a_x), 0.5);
}

TEST(Noise, OffIsBitExact) {
  const auto clean = simulate_clean(SimScenario{});
  const auto out = add_noise(clean, NoiseSpec::none(), 1);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    EXPECT_EQ(std::memcmp(&clean[i], &out[i], sizeof(flight_data::MeasuredSample)), 0) << i;
  }
}

TEST(Noise, QuantizationOnlyGivesMultiplesOfStep) {
  const auto clean = simulate_clean(SimScenario{});
  NoiseSpec n;
  n.alpha.step = units::deg_to_rad(0.3516);
  n.a_z.step = 0.0039 * units::kStandardGravity;
  n.V.step = 0.5 * units::kKnotToMps;
  const auto out = add_noise(clean, n, 1);
  for (const auto& s : out.samples) {
    for (auto [v, g] : {std::pair{s.alpha, n.alpha.step}, {s.a_z, n.a_z.step}, {s.V, n.V.step}}) {
      const double k = v / g;
      EXPECT_NEAR(k, std::round(k), 1e-9) << v;
    }
  }
}

TEST(Noise, EmpiricalSigmaMatches) {
  const auto clean = constant_states(10000);
  NoiseSpec n;
  n.a_x.sigma = 0.02;
  n.mass.sigma = 30.0;
  n.q.sigma = 1e-3;
  const auto out = add_noise(clean, n, 20240611);
  std::vector<double> ax, m, q;
  for (std::size_t i = 0; i < out.size(); ++i) {
    ax.push_back(out[i].a_x - clean[i].a_x);
    m.push_back(out[i].mass - clean[i].mass);
    q.push_back(out[i].q - clean[i].q);
  }
  EXPECT_NEAR(sample_std(ax), 0.02, 0.05 * 0.02);
  EXPECT_NEAR(sample_std(m), 30.0, 0.05 * 30.0);
  EXPECT_NEAR(sample_std(q), 1e-3, 0.05 * 1e-3);
}

TEST(Noise, QuantizationErrorIsBounded) {
  const auto clean = simulate_clean(SimScenario{});
  NoiseSpec gaussian;
  gaussian.a_z.sigma = 0.03;
  NoiseSpec both = gaussian;
  both.a_z.step = 0.05;
  const auto g = add_noise(clean, gaussian, 77);
  const auto q = add_noise(clean, both, 77);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    EXPECT_LE(std::abs(q[i].a_z - g[i].a_z), 0.025 + 1e-12);
  }
}

TEST(Noise, SeedDeterminism) {
  SimScenario sc;
  const auto a = simulate(sc);
  const auto b = simulate(sc);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::memcmp(&a[i], &b[i], sizeof(flight_data::MeasuredSample)), 0);
  }
  sc.seed += 1;
  const auto c = simulate(sc);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].a_x != c[i].a_x;
  EXPECT_TRUE(differs);
}

TEST(Noise, RecorderDefaultAndScaling) {
  const auto d = NoiseSpec::recorder_default();
  EXPECT_NEAR(d.alpha.sigma, units::deg_to_rad(0.3516), 1e-15);
  EXPECT_EQ(d.alpha.sigma, d.alpha.step);
  EXPECT_GT(d.a_z.sigma, 0.0);
  const auto s = d.scaled(2.0);
  EXPECT_EQ(s.V.sigma, 2.0 * d.V.sigma);
  EXPECT_EQ(s.V.step, 2.0 * d.V.step);
  EXPECT_THROW(d.scaled(-1.0), ConfigError);
}

TEST(Noise, MachFollowsPerturbedAirspeed) {
  const auto clean = simulate_clean(SimScenario{});
  NoiseSpec n;
  n.V.sigma = 1.0;
  const auto out = add_noise(clean, n, 3);
  for (const auto& s : out.samples) {
    EXPECT_NEAR(s.V, s.mach * std::sqrt(1.4 * 287.05 * s.static_temp), 1e-6);
  }
}

TEST(Scenario, Validation) {
  SimScenario sc;
  EXPECT_NO_THROW(sc.validate());
  sc.duration_s = 10.0;
  EXPECT_THROW(sc.validate(), ConfigError);
  sc = {};
  sc.truth = Eigen::VectorXd::Zero(5);
  EXPECT_THROW(sc.validate(), ConfigError);
  sc = {};
  sc.noise.a_x.sigma = -1.0;
  EXPECT_THROW(sc.validate(), ConfigError);
}

TEST(Sweep, OneRecordPerScale) {
  const std::vector<double> scales{0.0, 0.5, 1.0, 2.0};
  const auto recs = noise_sweep(SimScenario{}, scales);
  ASSERT_EQ(recs.size(), scales.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].scale, scales[i]);
    EXPECT_EQ(recs[i].seed, derive_seed(20240611, i));
    EXPECT_TRUE(recs[i].ok) << recs[i].error;
    EXPECT_EQ(recs[i].cv.size(), 6u);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Sweep, DragErrorsGrowWithNoise) {
  std::vector<double> e0, e2;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SimScenario sc;
    sc.seed = 1000 + s;
    const std::vector<double> scales{0.0, 2.0};
    const auto recs = noise_sweep(sc, scales);
    ASSERT_TRUE(recs[0].ok && recs[1].ok);
    e0.push_back(recs[0].rel_error[3] + recs[0].rel_error[4]);
    e2.push_back(recs[1].rel_error[3] + recs[1].rel_error[4]);
  }
  std::nth_element(e0.begin(), e0.begin() + 10, e0.end());
  std::nth_element(e2.begin(), e2.begin() + 10, e2.end());
  EXPECT_GE(e2[10], e0[10]);
}
