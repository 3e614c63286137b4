#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgeem/flight_data.hpp"

namespace cgeem::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kFlagged = 3,
  kNumericFailure = 4,
};

struct EstimatorFlags {
  std::string estimator = "cg";
  double lambda = 1.0;
  std::string drag_model = "polar";
  double p0_scale = 100.0;
  double r_scale = 0.1;
  std::optional<std::uint64_t> seed;  // recorded in the manifest only
};

struct SimulateArgs {
  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_scale;
};

struct IdentifyArgs {
  std::vector<std::string> segments;
  std::string aircraft;  // empty: built-in defaults
  std::string out_dir;
  EstimatorFlags est;
};

struct CompareArgs {
  std::string segment;
  std::string aircraft;
  std::string out_dir;
  EstimatorFlags est;
};

struct ExtractArgs {
  std::string flight;
  std::string out_dir;
  flight_data::CruiseCriteria criteria;
  std::string flight_id;  // empty: input file stem
  std::string tail_id;
  std::string aircraft_type;
};

struct FleetArgs {
  std::string results_dir;
  std::string out_dir;
  std::optional<std::size_t> bins;  // empty: Sturges' rule
};

struct SweepArgs {
  std::string scenario;
  std::vector<double> scales;
  std::string out_dir;
  EstimatorFlags est;
};

int cmd_simulate(const SimulateArgs& a);
int cmd_identify(const IdentifyArgs& a);
int cmd_compare(const CompareArgs& a);
int cmd_extract(const ExtractArgs& a);
int cmd_fleet(const FleetArgs& a);
int cmd_sweep(const SweepArgs& a);

}  // namespace cgeem::cli
