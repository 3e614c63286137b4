#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgeem/aero_model.hpp"
#include "cgeem/compare.hpp"
#include "cgeem/convergence.hpp"
#include "cgeem/estimator.hpp"
#include "cgeem/fleet.hpp"
#include "cgeem/simgen.hpp"

// JSON and CSV forms of the library types. Malformed input raises
// ConfigError.

namespace cgeem::io {

using json = nlohmann::json;

json read_json(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void write_json(const std::filesystem::path& path, const json& j);

json to_json(const aero::AircraftConfig& cfg);
aero::AircraftConfig aircraft_config_from_json(const json& j);
aero::AircraftConfig load_aircraft_config(const std::filesystem::path& path);

json to_json(const simgen::SimScenario& sc);
simgen::SimScenario scenario_from_json(const json& j);
simgen::SimScenario load_scenario(const std::filesystem::path& path);

/// Parameter vector as a name -> value object.
json params_to_json(const std::vector<std::string>& names, const Eigen::VectorXd& v);
Eigen::VectorXd params_from_json(const json& j, const std::vector<std::string>& names);

json to_json(const estimator::EstimatorConfig& ecfg);

json to_json(const convergence::ConvergenceReport& r);
convergence::ConvergenceReport report_from_json(const json& j);

json to_json(const fleet::FlightResult& r);
fleet::FlightResult flight_result_from_json(const json& j);

json to_json(const fleet::FleetSummary& s);
json to_json(const estimator::ComparisonReport& c);
json to_json(const std::vector<simgen::SweepRecord>& sweep, const std::vector<std::string>& names);

/// k,theta_0..theta_{n-1},e_ax,e_az,gain_norm
void write_trace_csv(std::ostream& out, const estimator::EstimatorTrace& trace);
/// One gain-norm column per estimator that ran: k,cg,rls_1,rls_0.95
void write_gain_csv(std::ostream& out, const estimator::ComparisonReport& c);
void write_flagged_csv(std::ostream& out, const std::vector<fleet::FlaggedFlight>& flagged);
/// aircraft_type,flights,mean_cd0,std_cd0,mean_cdl,std_cdl at 4 significant digits.
void write_fleet_table_csv(std::ostream& out, const std::vector<fleet::TypeComparison>& rows);
void write_histogram_csv(std::ostream& out, const fleet::Histogram& h);

}  // namespace cgeem::io
