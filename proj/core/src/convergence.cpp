#include "cgeem/convergence.hpp"

#include <cmath>
#include <limits>

#include "cgeem/errors.hpp"
#include "cgeem/flight_data.hpp"

namespace cgeem::convergence {

namespace {

struct Moments {
  double mean;
  double std;
};

Moments sample_moments(std::span<const double> xs) {
  // shifted by the first value so a constant series has exactly zero spread
  const double x0 = xs.front();
  double shift = 0.0;
  for (double x : xs) shift += x - x0;
  const double mean = x0 + shift / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace

Window convergence_window(std::size_t n) {
  if (n < flight_data::kMinSegmentLength) {
    throw ConfigError("trace of " + std::to_string(n) + " steps is too short for the 60/40 split");
  }
  // ceil(0.6 n) in integer arithmetic
  return {(6 * n + 9) / 10, n};
}

double coefficient_of_variation(std::span<const double> series) {
  if (series.size() < 2) throw ConfigError("CV needs at least two values");
  const auto m = sample_moments(series);
  if (!(std::abs(m.mean) > kDegenerateMean)) {
    throw DegenerateError("mean is too close to zero for a coefficient of variation");
  }
  return m.std / std::abs(m.mean);
}

std::string_view to_string(ParamGroup g) {
  switch (g) {
    case ParamGroup::kLift: return "lift";
    case ParamGroup::kDrag: return "drag";
    case ParamGroup::kThrust: return "thrust";
  }
  return "?";
}

std::vector<ParamGroup> parameter_groups(aero::DragModel m) {
  using G = ParamGroup;
  if (m == aero::DragModel::kPolar) return {G::kLift, G::kLift, G::kLift, G::kDrag, G::kDrag, G::kThrust};
  return {G::kLift, G::kLift, G::kLift, G::kDrag, G::kDrag, G::kDrag, G::kThrust};
}

double Thresholds::for_group(ParamGroup g) const {
  switch (g) {
    case ParamGroup::kLift: return lift;
    case ParamGroup::kDrag: return drag;
    case ParamGroup::kThrust: return thrust;
  }
  return 0.0;
}

std::vector<std::string> ConvergenceReport::failing() const {
  std::vector<std::string> out;
  for (const auto& p : params) {
    if (!p.pass) out.push_back(p.name);
  }
  return out;
}

const ParameterStat& ConvergenceReport::at(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p;
  }
  throw ConfigError("no parameter named '" + std::string(name) + "'");
}

ConvergenceReport assess(const estimator::EstimatorTrace& trace, const Thresholds& thresholds) {
  ConvergenceReport report;
  report.window = convergence_window(trace.steps());
  report.drag_model = trace.drag_model;
  const auto groups = parameter_groups(trace.drag_model);
  const int n = static_cast<int>(groups.size());
  if (trace.final_theta().size() != n) throw ConfigError("trace does not match its drag model");

  report.converged = true;
  Eigen::VectorXd means(n);
  for (int i = 0; i < n; ++i) {
    const auto xs = trace.series(i, report.window.start, report.window.end);
    const auto m = sample_moments(xs);
    ParameterStat st;
    st.name = trace.param_names.at(static_cast<std::size_t>(i));
    st.group = groups[static_cast<std::size_t>(i)];
    st.mean = m.mean;
    st.std = m.std;
    st.threshold = thresholds.for_group(st.group);
    try {
      st.cv = coefficient_of_variation(xs);
      st.pass = st.cv < st.threshold;
    } catch (const DegenerateError&) {
      st.degenerate = true;
      st.cv = std::numeric_limits<double>::infinity();
      st.pass = false;
    }
    report.converged = report.converged && st.pass;
    means[i] = m.mean;
    report.params.push_back(std::move(st));
  }
  if (report.converged) report.representative = means;
  return report;
}

}  // namespace cgeem::convergence
