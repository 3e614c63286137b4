#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cgeem/aero_model.hpp"
#include "cgeem/estimator.hpp"
#include "cgeem/flight_data.hpp"

namespace cgeem::simgen {

using aero::AircraftConfig;
using aero::DragModel;
using flight_data::FlightSegment;
using flight_data::MeasuredSample;

/// Quasi-steady cruise: slow sinusoids on airspeed and angle of attack, level
/// flight path, linear fuel burn.
struct CruiseProfile {
  double v_mean = 231.5;  // m/s
  double v_amplitude = 2.0;
  double v_period_s = 80.0;
  double alpha_mean_deg = 2.0;
  double alpha_amplitude_deg = 0.3;
  double alpha_period_s = 50.0;
  double gamma_deg = 0.0;
  double mass0 = 48000.0;    // kg
  double fuel_flow = 0.67;   // kg/s
  double tat = 244.05;       // K

  /// State at time t with a_x = a_z = 0. q is the exact derivative of theta.
  MeasuredSample state_at(double t) const;
};

/// round(duration * rate) + 1 samples covering [0, duration].
FlightSegment synth_trajectory(double duration_s, double rate_hz, const CruiseProfile& profile);

/// Fills a_x, a_z with the noise-free model prediction at `truth`.
FlightSegment synth_forces(const Eigen::VectorXd& truth, const FlightSegment& states,
                           const AircraftConfig& cfg, DragModel drag = DragModel::kPolar);
FlightSegment synth_forces(const aero::AeroParameters& truth, const FlightSegment& states,
                           const AircraftConfig& cfg);

struct ChannelNoise {
  double sigma = 0.0;  // SI
  double step = 0.0;   // quantization step, SI; 0 disables
};

struct NoiseSpec {
  ChannelNoise alpha, q, theta, V, gamma, a_x, a_z, mass, fuel_flow, tat;

  /// sigma and quantization both equal to each channel's recorder granularity.
  static NoiseSpec recorder_default();
  static NoiseSpec none() { return {}; }
  /// Multiplies every sigma and quantization step by `s`.
  NoiseSpec scaled(double s) const;
};

/// Gaussian noise then round-to-nearest quantization, channel by channel.
/// Mach and static temperature are re-derived when V or TAT were perturbed.
FlightSegment add_noise(const FlightSegment& clean, const NoiseSpec& noise, std::uint64_t seed);

struct SimScenario {
  Eigen::VectorXd truth = aero::AeroParameters::a321_reference().to_vector();
  DragModel drag_model = DragModel::kPolar;
  AircraftConfig cfg;
  CruiseProfile profile;
  NoiseSpec noise = NoiseSpec::recorder_default();
  double noise_scale = 1.0;
  std::uint64_t seed = 20240611;
  double duration_s = 200.0;
  double rate_hz = 1.0;
  std::string flight_id = "SIM-0001";
  std::string tail_id = "SIM";
  std::string aircraft_type = "A321";

  void validate() const;
};

FlightSegment simulate_clean(const SimScenario& sc);
/// Clean history plus noise at sc.noise_scale.
FlightSegment simulate(const SimScenario& sc);

/// Independent stream for sweep entry `index`.
std::uint64_t derive_seed(std::uint64_t seed, std::size_t index);

struct SweepRecord {
  double scale = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Eigen::VectorXd estimate;   // final theta
  Eigen::VectorXd rel_error;  // |estimate - truth| / |truth|
  std::vector<double> cv;
  bool converged = false;
};

std::vector<SweepRecord> noise_sweep(const SimScenario& sc, std::span<const double> scales,
                                     const estimator::EstimatorConfig& ecfg = {});

}  // namespace cgeem::simgen
