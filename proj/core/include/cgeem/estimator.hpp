#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cgeem/aero_model.hpp"
#include "cgeem/flight_data.hpp"

namespace cgeem::estimator {

using aero::AircraftConfig;
using aero::DragModel;
using aero::MeasurementModel;
using flight_data::FlightSegment;
using flight_data::MeasuredSample;

enum class EstimatorKind { kConstantGain, kRls };

std::string_view to_string(EstimatorKind k);
EstimatorKind parse_estimator_kind(std::string_view s);

/// Which measurement channels enter the update. The four state channels are
/// passthrough, so kAccelOnly must give the same parameter trace as kFull.
enum class ChannelSet { kFull, kAccelOnly };

inline constexpr double kMaxCondition = 1e14;

struct EstimatorConfig {
  /// Initial parameter covariance. Empty means p0_scale * I.
  Eigen::MatrixXd p0;
  double p0_scale = 100.0;
  /// Measurement noise for [alpha, q, theta, V, a_x, a_z]. Empty means r_scale
  /// on every channel.
  Eigen::VectorXd r_diag;
  double r_scale = 0.1;
  /// Initial parameters. Empty means zeros.
  Eigen::VectorXd theta0;

  EstimatorKind kind = EstimatorKind::kConstantGain;
  double lambda = 1.0;
  DragModel drag_model = DragModel::kPolar;
  ChannelSet channels = ChannelSet::kFull;
  double jacobian_step = aero::kDefaultJacobianStep;

  Eigen::MatrixXd initial_covariance(int n) const;
  Eigen::VectorXd noise_diagonal() const;
  Eigen::VectorXd initial_theta(int n) const;

  /// Throws ConfigError on a violated invariant.
  void validate(int n) const;
};

/// Gain of one constant-gain update: K = P0 H' (H P0 H' + R)^-1.
/// `cond` receives the condition number of the innovation covariance.
/// Throws NumericError when it is singular or worse than kMaxCondition.
Eigen::MatrixXd cg_gain(const Eigen::MatrixXd& H, const Eigen::MatrixXd& P0,
                        const Eigen::MatrixXd& R, double* cond = nullptr);

struct RlsUpdate {
  Eigen::MatrixXd K;
  Eigen::MatrixXd P;
  double cond = 0.0;
};

/// K = P H' (lambda R + H P H')^-1, P' = sym((I - K H) P / lambda).
/// Throws NumericError if P' is not positive definite.
RlsUpdate rls_update(const Eigen::MatrixXd& H, const Eigen::MatrixXd& P, const Eigen::MatrixXd& R,
                     double lambda);

struct StepResult {
  Eigen::VectorXd theta;
  aero::Measurement residual;  // z - h(x, theta_prev), all six channels
  Eigen::MatrixXd gain;        // n x (6 or 2)
  double cond = 0.0;
};

/// One constant-gain step. `k` is only used to label a StepError.
StepResult cg_step(const MeasurementModel& model, const Eigen::VectorXd& theta_prev,
                   const MeasuredSample& sample, const EstimatorConfig& ecfg, std::size_t k = 0);

struct RlsStepResult : StepResult {
  Eigen::MatrixXd P;
};

RlsStepResult rls_step(const MeasurementModel& model, const Eigen::VectorXd& theta_prev,
                       const Eigen::MatrixXd& P_prev, const MeasuredSample& sample,
                       const EstimatorConfig& ecfg, std::size_t k = 0);

struct EstimatorTrace {
  EstimatorKind kind = EstimatorKind::kConstantGain;
  double lambda = 1.0;
  DragModel drag_model = DragModel::kPolar;
  std::vector<std::string> param_names;
  std::vector<Eigen::VectorXd> theta;        // theta_k after step k
  std::vector<aero::Measurement> residual;   // e_k
  std::vector<double> gain_norm;             // Frobenius norm of K_k
  std::vector<double> condition;             // of S_k

  std::size_t steps() const { return theta.size(); }
  const Eigen::VectorXd& final_theta() const { return theta.back(); }
  /// Parameter i over steps [begin, end).
  std::vector<double> series(int i, std::size_t begin = 0,
                             std::size_t end = static_cast<std::size_t>(-1)) const;
};

/// Builds the measurement model a run uses; the linear drag model takes the
/// first sample's airspeed as V0.
MeasurementModel make_model(const FlightSegment& segment, const AircraftConfig& cfg,
                            DragModel drag);

EstimatorTrace run_cg_eem(const FlightSegment& segment, const AircraftConfig& cfg,
                          const EstimatorConfig& ecfg);
EstimatorTrace run_rls(const FlightSegment& segment, const AircraftConfig& cfg,
                       const EstimatorConfig& ecfg);

/// Dispatches on ecfg.kind.
EstimatorTrace run(const FlightSegment& segment, const AircraftConfig& cfg,
                   const EstimatorConfig& ecfg);

/// min/max of the gain norm over the run.
double gain_ratio(const EstimatorTrace& trace);

}  // namespace cgeem::estimator
