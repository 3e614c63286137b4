#include "cgeem/aero_model.hpp"

#include <algorithm>
#include <cmath>

#include "cgeem/atmosphere.hpp"
#include "cgeem/errors.hpp"
#include "cgeem/units.hpp"

namespace cgeem::aero {

const std::array<std::string_view, AeroParameters::kSize>& AeroParameters::names() {
  static constexpr std::array<std::string_view, kSize> kNames = {"C_L0", "C_Lalpha", "C_LM",
                                                                  "C_D0", "C_DL",     "C_TV"};
  return kNames;
}

Eigen::VectorXd AeroParameters::to_vector() const {
  Eigen::VectorXd v(kSize);
  v << c_l0, c_l_alpha, c_lm, c_d0, c_dl, c_tv;
  return v;
}

AeroParameters AeroParameters::from_vector(const Eigen::VectorXd& v) {
  if (v.size() != kSize) throw ConfigError("parameter vector must have 6 entries");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

AeroParameters AeroParameters::a321_reference() {
  return {0.205, 0.0256, 0.157, 0.0054, 0.0019, 0.0329};
}

std::string_view to_string(DragModel m) { return m == DragModel::kPolar ? "polar" : "linear"; }

DragModel parse_drag_model(std::string_view s) {
  if (s == "polar") return DragModel::kPolar;
  if (s == "linear") return DragModel::kLinear;
  throw ConfigError("unknown drag model '" + std::string(s) + "'");
}

void AircraftConfig::validate() const {
  if (!(wing_area > 0.0)) throw ConfigError("wing_area_m2 must be positive");
  if (!(t0 > 0.0)) throw ConfigError("t0_tsfc must be positive");
  if (!(std::abs(sigma) < 0.1)) throw ConfigError("|sigma_rad| must be below 0.1");
  if (rho_mode == RhoMode::kFixed && !(rho_fixed > 0.0)) {
    throw ConfigError("rho_fixed must be positive");
  }
  if (rho_mode == RhoMode::kIsa) atmosphere::isa_density(pressure_altitude_m);
}

double AircraftConfig::density() const {
  return rho_mode == RhoMode::kFixed ? rho_fixed : atmosphere::isa_density(pressure_altitude_m);
}

ModelInputs make_inputs(const MeasuredSample& s, const AircraftConfig& cfg) {
  return {s, 0.5 * cfg.density() * s.V * s.V};
}

double lift_coefficient(const AeroParameters& p, double alpha_deg, double mach) {
  return p.c_l0 + p.c_l_alpha * alpha_deg + p.c_lm * mach;
}

double drag_coefficient_polar(const AeroParameters& p, double c_l) {
  return p.c_d0 + p.c_dl * (c_l * c_l);
}

double drag_coefficient_linear(const AltDragParameters& p, double V, double alpha_deg) {
  return p.c_d0 + p.c_dv * V / p.v0 + p.c_d_alpha * alpha_deg;
}

double thrust(double c_tv, double fuel_flow, double mach, const AircraftConfig& cfg) {
  const double tsfc = cfg.t0 + c_tv * mach;
  if (!(tsfc > 0.0)) {
    throw SingularModelError("non-positive TSFC " + std::to_string(tsfc));
  }
  const double f = cfg.tsfc_unit == TsfcUnit::kPerHour ? fuel_flow * units::kSecondsPerHour
                                                       : fuel_flow;
  return f / tsfc;
}

double thrust(const AeroParameters& p, double fuel_flow, double mach, const AircraftConfig& cfg) {
  return thrust(p.c_tv, fuel_flow, mach, cfg);
}

Forces forces(const AeroParameters& p, const ModelInputs& in, const AircraftConfig& cfg) {
  const auto& s = in.sample;
  const double c_l = lift_coefficient(p, s.alpha_deg(), s.mach);
  const double c_d = drag_coefficient_polar(p, c_l);
  const double qs = in.qbar * cfg.wing_area;
  return {qs * c_l, qs * c_d, thrust(p, s.fuel_flow, s.mach, cfg)};
}

Accelerations predict_accelerations(double lift, double drag, double thrust, double alpha_rad,
                                    double sigma, double mass) {
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  const double ca = std::cos(alpha_rad);
  const double sa = std::sin(alpha_rad);
  return {(-drag * ca - lift * sa + thrust * std::cos(sigma)) / mass,
          (-drag * sa + lift * ca + thrust * std::sin(sigma)) / mass};
}

Measurement observed(const MeasuredSample& s) {
  Measurement z;
  z << s.alpha, s.q, s.theta, s.V, s.a_x, s.a_z;
  return z;
}

Measurement predict_measurement(const AeroParameters& p, const MeasuredSample& s,
                                const AircraftConfig& cfg) {
  return MeasurementModel(cfg).predict(p.to_vector(), s);
}

Eigen::Matrix<double, kChannels, AeroParameters::kSize> jacobian(const AeroParameters& p,
                                                                 const MeasuredSample& s,
                                                                 const AircraftConfig& cfg,
                                                                 double h_rel) {
  return MeasurementModel(cfg).jacobian(p.to_vector(), s, h_rel);
}

std::vector<std::string> param_names(DragModel m) {
  if (m == DragModel::kPolar) {
    const auto& n = AeroParameters::names();
    return {n.begin(), n.end()};
  }
  return {"C_L0", "C_Lalpha", "C_LM", "C_D0", "C_DV", "C_Dalpha", "C_TV"};
}

MeasurementModel::MeasurementModel(AircraftConfig cfg, DragModel drag, double v0)
    : cfg_(cfg), drag_(drag), v0_(v0) {
  cfg_.validate();
  if (!(v0_ > 0.0)) throw ConfigError("reference speed v0 must be positive");
  rho_ = cfg_.density();
}

std::vector<std::string> MeasurementModel::param_names() const { return aero::param_names(drag_); }

Measurement MeasurementModel::predict(const Eigen::VectorXd& theta,
                                      const MeasuredSample& s) const {
  if (theta.size() != num_params()) throw ConfigError("parameter vector has the wrong size");
  const double alpha_deg = s.alpha_deg();
  const double qs = 0.5 * rho_ * s.V * s.V * cfg_.wing_area;

  const AeroParameters lift_part{theta[0], theta[1], theta[2], 0.0, 0.0, 0.0};
  const double c_l = lift_coefficient(lift_part, alpha_deg, s.mach);
  const double c_d =
      drag_ == DragModel::kPolar
          ? drag_coefficient_polar({0.0, 0.0, 0.0, theta[3], theta[4], 0.0}, c_l)
          : drag_coefficient_linear({theta[3], theta[4], theta[5], v0_}, s.V, alpha_deg);
  const double c_tv = theta[theta.size() - 1];
  const double t = thrust(c_tv, s.fuel_flow, s.mach, cfg_);
  const auto acc = predict_accelerations(qs * c_l, qs * c_d, t, s.alpha, cfg_.sigma, s.mass);

  Measurement z;
  z << s.alpha, s.q, s.theta, s.V, acc.a_x, acc.a_z;
  return z;
}

Eigen::MatrixXd MeasurementModel::jacobian(const Eigen::VectorXd& theta, const MeasuredSample& s,
                                           double h_rel) const {
  if (!(h_rel > 0.0)) throw ConfigError("finite-difference step must be positive");
  const int n = num_params();
  Eigen::MatrixXd H(kChannels, n);
  Eigen::VectorXd probe = theta;
  for (int i = 0; i < n; ++i) {
    const double h = std::max(h_rel * std::abs(theta[i]), kJacobianMinStep);
    const double hi = theta[i] + h;
    const double lo = theta[i] - h;
    probe[i] = hi;
    const Measurement up = predict(probe, s);
    probe[i] = lo;
    const Measurement down = predict(probe, s);
    probe[i] = theta[i];
    H.col(i) = (up - down) / (hi - lo);
  }
  return H;
}

}  // namespace cgeem::aero
