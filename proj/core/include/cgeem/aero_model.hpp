#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cgeem/flight_data.hpp"

namespace cgeem::aero {

using flight_data::MeasuredSample;

/// Estimated vector [C_L0, C_Lalpha, C_LM, C_D0, C_DL, C_TV]. Alpha enters the
/// polynomials in degrees, so c_l_alpha is per degree.
struct AeroParameters {
  double c_l0 = 0.0;
  double c_l_alpha = 0.0;
  double c_lm = 0.0;
  double c_d0 = 0.0;
  double c_dl = 0.0;
  double c_tv = 0.0;

  static constexpr int kSize = 6;
  static const std::array<std::string_view, kSize>& names();

  Eigen::VectorXd to_vector() const;
  static AeroParameters from_vector(const Eigen::VectorXd& v);

  /// A321 fleet means; the simulation ground truth.
  static AeroParameters a321_reference();
};

/// C_D = C_D0 + C_DV * V / V0 + C_Dalpha * alpha_deg.
struct AltDragParameters {
  double c_d0 = 0.0;
  double c_dv = 0.0;
  double c_d_alpha = 0.0;
  double v0 = 1.0;  // m/s
};

enum class DragModel { kPolar, kLinear };

std::string_view to_string(DragModel m);
DragModel parse_drag_model(std::string_view s);

enum class TsfcUnit {
  kPerHour,    // kg/(N h), the customary engine-deck unit
  kPerSecond,  // kg/(N s)
};

enum class RhoMode { kFixed, kIsa };

struct AircraftConfig {
  double wing_area = 122.6;  // m^2
  double sigma = 0.0;        // thrust line offset, rad
  double t0 = 0.03;          // baseline TSFC in tsfc_unit
  TsfcUnit tsfc_unit = TsfcUnit::kPerHour;
  RhoMode rho_mode = RhoMode::kFixed;
  double rho_fixed = 0.38;             // kg/m^3
  double pressure_altitude_m = 10668;  // used when rho_mode == kIsa

  /// Throws ConfigError on a violated invariant.
  void validate() const;
  double density() const;
};

struct ModelInputs {
  MeasuredSample sample;
  double qbar = 0.0;  // Pa
};

ModelInputs make_inputs(const MeasuredSample& s, const AircraftConfig& cfg);

double lift_coefficient(const AeroParameters& p, double alpha_deg, double mach);
double drag_coefficient_polar(const AeroParameters& p, double c_l);
double drag_coefficient_linear(const AltDragParameters& p, double V, double alpha_deg);

/// T = f / (T0 + C_TV M). Throws SingularModelError when the TSFC is not positive.
double thrust(double c_tv, double fuel_flow, double mach, const AircraftConfig& cfg);
double thrust(const AeroParameters& p, double fuel_flow, double mach, const AircraftConfig& cfg);

struct Forces {
  double lift = 0.0;
  double drag = 0.0;
  double thrust = 0.0;
};

Forces forces(const AeroParameters& p, const ModelInputs& in, const AircraftConfig& cfg);

struct Accelerations {
  double a_x = 0.0;
  double a_z = 0.0;
};

Accelerations predict_accelerations(double lift, double drag, double thrust, double alpha_rad,
                                    double sigma, double mass);

inline constexpr int kChannels = 6;
using Measurement = Eigen::Matrix<double, kChannels, 1>;

/// Observed vector [alpha, q, theta, V, a_x, a_z].
Measurement observed(const MeasuredSample& s);

Measurement predict_measurement(const AeroParameters& p, const MeasuredSample& s,
                                const AircraftConfig& cfg);

inline constexpr double kDefaultJacobianStep = 1e-6;
inline constexpr double kJacobianMinStep = 1e-8;

/// d(zhat)/d(theta) by central differences.
Eigen::Matrix<double, kChannels, AeroParameters::kSize> jacobian(
    const AeroParameters& p, const MeasuredSample& s, const AircraftConfig& cfg,
    double h_rel = kDefaultJacobianStep);

/// The measurement function h(x, theta) for either drag model. With the linear
/// model the vector is [C_L0, C_Lalpha, C_LM, C_D0, C_DV, C_Dalpha, C_TV].
class MeasurementModel {
 public:
  explicit MeasurementModel(AircraftConfig cfg, DragModel drag = DragModel::kPolar,
                            double v0 = 1.0);

  int num_params() const { return drag_ == DragModel::kPolar ? 6 : 7; }
  DragModel drag_model() const { return drag_; }
  const AircraftConfig& config() const { return cfg_; }
  double v0() const { return v0_; }
  std::vector<std::string> param_names() const;

  Measurement predict(const Eigen::VectorXd& theta, const MeasuredSample& s) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta, const MeasuredSample& s,
                           double h_rel = kDefaultJacobianStep) const;

 private:
  AircraftConfig cfg_;
  DragModel drag_;
  double v0_;
  double rho_;
};

std::vector<std::string> param_names(DragModel m);

}  // namespace cgeem::aero
