#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cgeem/aero_model.hpp"
#include "cgeem/estimator.hpp"

namespace cgeem::convergence {

struct Window {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - start; }
};

/// [ceil(0.6 N), N). Throws ConfigError for N < 50.
Window convergence_window(std::size_t trace_len);

/// Sample standard deviation over |mean|. Throws ConfigError for fewer than
/// two values and DegenerateError when |mean| <= 1e-12.
double coefficient_of_variation(std::span<const double> series);

inline constexpr double kDegenerateMean = 1e-12;

enum class ParamGroup { kLift, kDrag, kThrust };

std::string_view to_string(ParamGroup g);
std::vector<ParamGroup> parameter_groups(aero::DragModel m);

struct Thresholds {
  double lift = 0.01;
  double drag = 0.10;
  double thrust = 0.01;

  double for_group(ParamGroup g) const;
};

struct ParameterStat {
  std::string name;
  ParamGroup group = ParamGroup::kLift;
  double mean = 0.0;
  double std = 0.0;
  double cv = 0.0;  // infinity when degenerate
  double threshold = 0.0;
  bool degenerate = false;
  bool pass = false;
};

struct ConvergenceReport {
  Window window;
  aero::DragModel drag_model = aero::DragModel::kPolar;
  std::vector<ParameterStat> params;
  bool converged = false;
  std::optional<Eigen::VectorXd> representative;  // window means, only when converged

  std::vector<std::string> failing() const;
  const ParameterStat& at(std::string_view name) const;
};

ConvergenceReport assess(const estimator::EstimatorTrace& trace, const Thresholds& thresholds = {});

}  // namespace cgeem::convergence
