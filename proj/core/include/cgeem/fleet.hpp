#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cgeem/aero_model.hpp"
#include "cgeem/convergence.hpp"

namespace cgeem::fleet {

struct FlightResult {
  std::string flight_id;
  std::string tail_id;
  std::string aircraft_type;
  convergence::ConvergenceReport report;

  bool converged() const { return report.converged && report.representative.has_value(); }
  const Eigen::VectorXd& representative() const { return *report.representative; }
  std::vector<std::string> param_names() const;
};

struct ParamStats {
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample
  double max = 0.0;
  double min = 0.0;
};

struct TypeSummary {
  std::string aircraft_type;
  std::size_t count = 0;
  std::vector<ParamStats> params;
  std::optional<double> pearson_cd0_cdl;

  const ParamStats& at(std::string_view name) const;
};

struct FlaggedFlight {
  std::string flight_id;
  std::string aircraft_type;
  std::vector<std::string> failing;
};

struct FleetSummary {
  std::vector<TypeSummary> types;  // sorted by aircraft_type
  std::vector<FlaggedFlight> flagged;
  std::vector<std::string> notes;  // e.g. types omitted for too few flights
};

inline constexpr std::size_t kMinFlightsPerType = 2;

/// Converged flights only, grouped by type. Results are sorted by flight_id
/// before any reduction so the output does not depend on input order.
FleetSummary aggregate(std::vector<FlightResult> results);

/// Pearson correlation. Throws ConfigError for fewer than 3 pairs and
/// DegenerateError when either coordinate has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson r between C_D0 and C_DL over converged polar-model flights.
double correlation_cd0_cdl(const std::vector<FlightResult>& results);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

/// ceil(log2 n) + 1
std::size_t sturges_bins(std::size_t n);

/// Equal-width bins over [min, max]; bins are half-open except the last.
/// All-equal values give a single bin holding everything.
Histogram histogram(std::span<const double> values, std::size_t bin_count);

struct TypeComparison {
  std::string aircraft_type;
  std::size_t flights = 0;
  double mean_cd0 = 0.0;
  double std_cd0 = 0.0;
  double mean_cdl = 0.0;
  double std_cdl = 0.0;
  bool tie_with_next = false;  // equal mean C_D0 with the next row
};

/// Types ordered by descending mean C_D0.
std::vector<TypeComparison> type_table(const FleetSummary& summary);

/// type_table for a real comparison. Throws ConfigError with fewer than
/// two types.
std::vector<TypeComparison> cross_type_compare(const FleetSummary& summary);

}  // namespace cgeem::fleet
