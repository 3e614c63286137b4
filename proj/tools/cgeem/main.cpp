#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_estimator_flags(CLI::App* cmd, cgeem::cli::EstimatorFlags& f) {
  cmd->add_option("--estimator", f.estimator, "Estimator kind")
      ->check(CLI::IsMember({"cg", "rls"}))
      ->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "RLS forgetting factor in (0, 1]")->capture_default_str();
  cmd->add_option("--drag-model", f.drag_model, "Drag model")
      ->check(CLI::IsMember({"polar", "linear"}))
      ->capture_default_str();
  cmd->add_option("--p0-scale", f.p0_scale, "Initial covariance P0 = scale * I")
      ->capture_default_str();
  cmd->add_option("--r-scale", f.r_scale, "Measurement noise R = scale * I")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed recorded in the manifest");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cgeem::cli;

  CLI::App app{"Constant-gain equation-error identification of cruise aerodynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CGEEM_VERSION);
  app.footer("Exit codes: 0 ok/converged, 2 input error, 3 flagged, 4 numeric failure.\n"
             "CGEEM_THREADS caps the worker threads; SOURCE_DATE_EPOCH fixes manifest times.");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a pseudo-QAR segment from a scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario JSON")->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_option("--noise-scale", sim.noise_scale, "Override the scenario noise scale");

  IdentifyArgs id;
  auto* identify = app.add_subcommand("identify", "Estimate parameters for one or more segments");
  identify->add_option("--segment", id.segments, "Segment CSV (repeatable)")->required();
  identify->add_option("--aircraft", id.aircraft, "Aircraft config JSON");
  identify->add_option("--out", id.out_dir, "Output directory")->required();
  add_estimator_flags(identify, id.est);

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Run CG, RLS(1) and RLS(0.95) side by side");
  compare->add_option("--segment", cmp.segment, "Segment CSV")->required();
  compare->add_option("--aircraft", cmp.aircraft, "Aircraft config JSON");
  compare->add_option("--out", cmp.out_dir, "Output directory")->required();
  add_estimator_flags(compare, cmp.est);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Cut cruise segments from a recorder CSV");
  extract->add_option("--flight", ex.flight, "Recorder CSV with QAR-code columns")->required();
  extract->add_option("--out", ex.out_dir, "Output directory")->required();
  extract->add_option("--grid-hz", ex.criteria.grid_rate_hz, "Common grid rate")
      ->capture_default_str();
  extract->add_option("--gamma-max-deg", ex.criteria.gamma_max_deg, "Flight path limit")
      ->capture_default_str();
  extract->add_option("--q-max-deg-s", ex.criteria.q_max_deg_s, "Pitch rate limit")
      ->capture_default_str();
  extract->add_option("--v-std-max", ex.criteria.v_std_max_mps, "Airspeed std limit, m/s")
      ->capture_default_str();
  extract->add_option("--v-std-window", ex.criteria.v_std_window_s, "Airspeed std window, s")
      ->capture_default_str();
  extract->add_option("--min-duration", ex.criteria.min_duration_s, "Minimum segment length, s")
      ->capture_default_str();
  extract->add_option("--flight-id", ex.flight_id, "Flight id stamped on the segments");
  extract->add_option("--tail-id", ex.tail_id, "Tail id stamped on the segments");
  extract->add_option("--aircraft-type", ex.aircraft_type, "Aircraft type stamped on the segments");

  FleetArgs fl;
  auto* fleet = app.add_subcommand("fleet", "Aggregate per-flight results");
  fleet->add_option("--results", fl.results_dir, "Directory of result JSON files")->required();
  fleet->add_option("--out", fl.out_dir, "Output directory")->required();
  fleet->add_option("--bins", fl.bins, "Histogram bins (default: Sturges' rule)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Noise-intensity sweep on a scenario");
  sweep->add_option("--scenario", sw.scenario, "Scenario JSON")->required();
  sweep->add_option("--scales", sw.scales, "Noise multipliers")->required()->delimiter(',');
  sweep->add_option("--out", sw.out_dir, "Output directory")->required();
  add_estimator_flags(sweep, sw.est);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  if (*simulate) return cmd_simulate(sim);
  if (*identify) return cmd_identify(id);
  if (*compare) return cmd_compare(cmp);
  if (*extract) return cmd_extract(ex);
  if (*fleet) return cmd_fleet(fl);
  if (*sweep) return cmd_sweep(sw);
  return kInputError;
}
