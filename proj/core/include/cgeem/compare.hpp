#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cgeem/convergence.hpp"
#include "cgeem/estimator.hpp"

namespace cgeem::estimator {

struct ComparisonEntry {
  std::string label;  // "cg", "rls_1", "rls_0.95"
  EstimatorKind kind = EstimatorKind::kConstantGain;
  double lambda = 1.0;
  std::optional<EstimatorTrace> trace;
  std::optional<convergence::ConvergenceReport> report;
  std::string error;  // set when the run failed
  std::optional<std::size_t> failed_step;
  double gain_ratio = 0.0;

  bool ok() const { return trace.has_value(); }
};

struct ComparisonReport {
  std::vector<ComparisonEntry> rows;
};

/// Runs CG, RLS(lambda = 1) and RLS(lambda = 0.95) on the same segment. A
/// failed run is recorded and the others still execute.
ComparisonReport compare_estimators(const FlightSegment& segment, const AircraftConfig& cfg,
                                    const EstimatorConfig& base,
                                    const convergence::Thresholds& thresholds = {});

}  // namespace cgeem::estimator
