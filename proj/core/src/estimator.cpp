#include "cgeem/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "cgeem/errors.hpp"

namespace cgeem::estimator {

namespace {

double condition_number(const Eigen::MatrixXd& S) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// Solves S X = B for symmetric positive-definite S with the condition guard.
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& S, const Eigen::MatrixXd& B, double* cond) {
  const double c = condition_number(S);
  if (cond) *cond = c;
  if (!(c <= kMaxCondition)) {
    throw NumericError("innovation covariance is numerically singular (condition " +
                       std::to_string(c) + ")");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NumericError("innovation covariance is not positive definite");
  }
  return llt.solve(B);
}

struct Linearization {
  aero::Measurement residual;
  Eigen::MatrixXd H;  // rows of the active channels
  Eigen::MatrixXd R;
  Eigen::VectorXd e;  // residual on the active channels
};

Linearization linearize(const MeasurementModel& model, const Eigen::VectorXd& theta,
                        const MeasuredSample& sample, const EstimatorConfig& ecfg) {
  Linearization lin;
  lin.residual = aero::observed(sample) - model.predict(theta, sample);
  const Eigen::MatrixXd H = model.jacobian(theta, sample, ecfg.jacobian_step);
  const Eigen::VectorXd r = ecfg.noise_diagonal();
  if (ecfg.channels == ChannelSet::kFull) {
    lin.H = H;
    lin.R = r.asDiagonal();
    lin.e = lin.residual;
  } else {
    lin.H = H.bottomRows(2);
    lin.R = r.tail(2).asDiagonal();
    lin.e = lin.residual.tail(2);
  }
  return lin;
}

template <typename F>
auto as_step_error(std::size_t k, F&& f) {
  try {
    return f();
  } catch (const StepError&) {
    throw;
  } catch (const NumericError& e) {
    throw StepError(k, "step " + std::to_string(k) + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(EstimatorKind k) {
  return k == EstimatorKind::kConstantGain ? "cg" : "rls";
}

EstimatorKind parse_estimator_kind(std::string_view s) {
  if (s == "cg") return EstimatorKind::kConstantGain;
  if (s == "rls") return EstimatorKind::kRls;
  throw ConfigError("unknown estimator '" + std::string(s) + "'");
}

Eigen::MatrixXd EstimatorConfig::initial_covariance(int n) const {
  if (p0.size() == 0) return p0_scale * Eigen::MatrixXd::Identity(n, n);
  return p0;
}

Eigen::VectorXd EstimatorConfig::noise_diagonal() const {
  if (r_diag.size() == 0) return Eigen::VectorXd::Constant(aero::kChannels, r_scale);
  return r_diag;
}

Eigen::VectorXd EstimatorConfig::initial_theta(int n) const {
  if (theta0.size() == 0) return Eigen::VectorXd::Zero(n);
  return theta0;
}

void EstimatorConfig::validate(int n) const {
  const Eigen::MatrixXd P = initial_covariance(n);
  if (P.rows() != n || P.cols() != n) throw ConfigError("p0 has the wrong dimension");
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw ConfigError("p0 must be symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(P).info() != Eigen::Success) {
    throw ConfigError("p0 must be positive definite");
  }
  const Eigen::VectorXd r = noise_diagonal();
  if (r.size() != aero::kChannels) throw ConfigError("R must have one entry per channel");
  if (!(r.minCoeff() > 0.0)) throw ConfigError("R entries must be positive");
  if (initial_theta(n).size() != n) throw ConfigError("theta0 has the wrong dimension");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0, 1]");
  if (!(jacobian_step > 0.0)) throw ConfigError("jacobian step must be positive");
}

Eigen::MatrixXd cg_gain(const Eigen::MatrixXd& H, const Eigen::MatrixXd& P0,
                        const Eigen::MatrixXd& R, double* cond) {
  const Eigen::MatrixXd HP = H * P0;
  const Eigen::MatrixXd S = HP * H.transpose() + R;
  return spd_solve(S, HP, cond).transpose();
}

RlsUpdate rls_update(const Eigen::MatrixXd& H, const Eigen::MatrixXd& P, const Eigen::MatrixXd& R,
                     double lambda) {
  RlsUpdate out;
  const Eigen::MatrixXd HP = H * P;
  const Eigen::MatrixXd S = lambda * R + HP * H.transpose();
  out.K = spd_solve(S, HP, &out.cond).transpose();
  const auto n = P.rows();
  Eigen::MatrixXd next = (Eigen::MatrixXd::Identity(n, n) - out.K * H) * P / lambda;
  out.P = 0.5 * (next + next.transpose());
  if (Eigen::LLT<Eigen::MatrixXd>(out.P).info() != Eigen::Success) {
    throw NumericError("RLS covariance lost positive definiteness");
  }
  return out;
}

StepResult cg_step(const MeasurementModel& model, const Eigen::VectorXd& theta_prev,
                   const MeasuredSample& sample, const EstimatorConfig& ecfg, std::size_t k) {
  return as_step_error(k, [&] {
    const auto lin = linearize(model, theta_prev, sample, ecfg);
    StepResult out;
    out.residual = lin.residual;
    out.gain = cg_gain(lin.H, ecfg.initial_covariance(model.num_params()), lin.R, &out.cond);
    out.theta = theta_prev + out.gain * lin.e;
    return out;
  });
}

RlsStepResult rls_step(const MeasurementModel& model, const Eigen::VectorXd& theta_prev,
                       const Eigen::MatrixXd& P_prev, const MeasuredSample& sample,
                       const EstimatorConfig& ecfg, std::size_t k) {
  return as_step_error(k, [&] {
    const auto lin = linearize(model, theta_prev, sample, ecfg);
    auto upd = rls_update(lin.H, P_prev, lin.R, ecfg.lambda);
    RlsStepResult out;
    out.residual = lin.residual;
    out.theta = theta_prev + upd.K * lin.e;
    out.gain = std::move(upd.K);
    out.P = std::move(upd.P);
    out.cond = upd.cond;
    return out;
  });
}

std::vector<double> EstimatorTrace::series(int i, std::size_t begin, std::size_t end) const {
  end = std::min(end, theta.size());
  std::vector<double> out;
  out.reserve(end > begin ? end - begin : 0);
  for (std::size_t k = begin; k < end; ++k) out.push_back(theta[k][i]);
  return out;
}

MeasurementModel make_model(const FlightSegment& segment, const AircraftConfig& cfg,
                            DragModel drag) {
  const double v0 = segment.empty() ? 1.0 : segment[0].V;
  return MeasurementModel(cfg, drag, v0);
}

namespace {

EstimatorTrace start_trace(const MeasurementModel& model, const FlightSegment& segment,
                           const EstimatorConfig& ecfg) {
  flight_data::validate_segment(segment);
  ecfg.validate(model.num_params());
  EstimatorTrace trace;
  trace.kind = ecfg.kind;
  trace.lambda = ecfg.lambda;
  trace.drag_model = ecfg.drag_model;
  trace.param_names = model.param_names();
  const auto n = segment.size();
  trace.theta.reserve(n);
  trace.residual.reserve(n);
  trace.gain_norm.reserve(n);
  trace.condition.reserve(n);
  return trace;
}

void record(EstimatorTrace& trace, const StepResult& step) {
  trace.theta.push_back(step.theta);
  trace.residual.push_back(step.residual);
  trace.gain_norm.push_back(step.gain.norm());
  trace.condition.push_back(step.cond);
}

}  // namespace

EstimatorTrace run_cg_eem(const FlightSegment& segment, const AircraftConfig& cfg,
                          const EstimatorConfig& ecfg) {
  const auto model = make_model(segment, cfg, ecfg.drag_model);
  auto trace = start_trace(model, segment, ecfg);
  trace.kind = EstimatorKind::kConstantGain;
  Eigen::VectorXd theta = ecfg.initial_theta(model.num_params());
  for (std::size_t k = 0; k < segment.size(); ++k) {
    auto step = cg_step(model, theta, segment[k], ecfg, k);
    theta = step.theta;
    record(trace, step);
  }
  return trace;
}

EstimatorTrace run_rls(const FlightSegment& segment, const AircraftConfig& cfg,
                       const EstimatorConfig& ecfg) {
  const auto model = make_model(segment, cfg, ecfg.drag_model);
  auto trace = start_trace(model, segment, ecfg);
  trace.kind = EstimatorKind::kRls;
  Eigen::VectorXd theta = ecfg.initial_theta(model.num_params());
  Eigen::MatrixXd P = ecfg.initial_covariance(model.num_params());
  for (std::size_t k = 0; k < segment.size(); ++k) {
    auto step = rls_step(model, theta, P, segment[k], ecfg, k);
    theta = step.theta;
    P = step.P;
    record(trace, step);
  }
  return trace;
}

EstimatorTrace run(const FlightSegment& segment, const AircraftConfig& cfg,
                   const EstimatorConfig& ecfg) {
  return ecfg.kind == EstimatorKind::kConstantGain ? run_cg_eem(segment, cfg, ecfg)
                                                   : run_rls(segment, cfg, ecfg);
}

double gain_ratio(const EstimatorTrace& trace) {
  if (trace.gain_norm.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(trace.gain_norm.begin(), trace.gain_norm.end());
  return *hi > 0.0 ? *lo / *hi : 0.0;
}

}  // namespace cgeem::estimator
