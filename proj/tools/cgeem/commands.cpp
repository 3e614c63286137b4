#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "cgeem/compare.hpp"
#include "cgeem/convergence.hpp"
#include "cgeem/errors.hpp"
#include "cgeem/estimator.hpp"
#include "cgeem/fleet.hpp"
#include "cgeem/serialization.hpp"
#include "cgeem/simgen.hpp"
#include "manifest.hpp"
#include "parallel.hpp"

namespace cgeem::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const NumericError& e) {
    std::cerr << "cgeem: numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    std::cerr << "cgeem: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "cgeem: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "cgeem: " << e.what() << '\n';
    return kInputError;
  }
}

fs::path prepare_out_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("an output directory is required");
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void require_file(const std::string& path) {
  if (path.empty() || !fs::is_regular_file(path)) {
    throw ConfigError("input file '" + path + "' does not exist");
  }
}

aero::AircraftConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  require_file(path);
  return io::load_aircraft_config(path);
}

estimator::EstimatorConfig estimator_config(const EstimatorFlags& f) {
  estimator::EstimatorConfig e;
  e.kind = estimator::parse_estimator_kind(f.estimator);
  e.lambda = f.lambda;
  e.drag_model = aero::parse_drag_model(f.drag_model);
  e.p0_scale = f.p0_scale;
  e.r_scale = f.r_scale;
  if (!(f.p0_scale > 0.0)) throw ConfigError("--p0-scale must be positive");
  if (!(f.r_scale > 0.0)) throw ConfigError("--r-scale must be positive");
  if (!(f.lambda > 0.0 && f.lambda <= 1.0)) throw ConfigError("--lambda must lie in (0, 1]");
  if (e.kind == estimator::EstimatorKind::kConstantGain && f.lambda != 1.0) {
    throw ConfigError("--lambda applies to the rls estimator only");
  }
  return e;
}

json flags_json(const EstimatorFlags& f) {
  return {{"estimator", f.estimator},
          {"lambda", f.lambda},
          {"drag_model", f.drag_model},
          {"p0_scale", f.p0_scale},
          {"r_scale", f.r_scale}};
}

flight_data::FlightSegment load_segment(const std::string& path) {
  require_file(path);
  auto seg = flight_data::read_segment_csv(fs::path(path));
  flight_data::validate_segment(seg);
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (const auto why = flight_data::check_sample(seg[i]); !why.empty()) {
      throw ConfigError(path + ": sample " + std::to_string(i) + ": " + why);
    }
  }
  if (seg.flight_id.empty()) seg.flight_id = fs::path(path).stem().string();
  return seg;
}

void write_trace(const fs::path& path, const estimator::EstimatorTrace& trace) {
  auto out = open_out(path);
  io::write_trace_csv(out, trace);
}

}  // namespace

int cmd_simulate(const SimulateArgs& a) {
  return guarded([&] {
    require_file(a.scenario);
    auto sc = io::load_scenario(a.scenario);
    if (a.seed) sc.seed = *a.seed;
    if (a.noise_scale) sc.noise_scale = *a.noise_scale;
    sc.validate();
    const auto dir = prepare_out_dir(a.out_dir);

    const auto segment = simgen::simulate(sc);
    flight_data::write_segment_csv(dir / "segment.csv", segment);
    io::write_json(dir / "truth.json",
                   {{"drag_model", aero::to_string(sc.drag_model)},
                    {"truth", io::params_to_json(aero::param_names(sc.drag_model), sc.truth)},
                    {"scenario", io::to_json(sc)}});

    Manifest m;
    m.command = "simulate";
    m.flags = {{"noise_scale", sc.noise_scale}};
    m.configs = {a.scenario};
    m.seed = sc.seed;
    m.inputs = {a.scenario};
    m.outputs = {"segment.csv", "truth.json"};
    m.write(dir);
    return int{kOk};
  });
}

int cmd_identify(const IdentifyArgs& a) {
  return guarded([&] {
    if (a.segments.empty()) throw ConfigError("at least one --segment is required");
    const auto cfg = load_config(a.aircraft);
    const auto ecfg = estimator_config(a.est);

    std::vector<flight_data::FlightSegment> segments;
    std::set<std::string> stems;
    for (const auto& path : a.segments) {
      segments.push_back(load_segment(path));
      if (!stems.insert(fs::path(path).stem().string()).second) {
        throw ConfigError("two segments share the file name '" + fs::path(path).stem().string() +
                          "'");
      }
    }
    const auto dir = prepare_out_dir(a.out_dir);

    struct Outcome {
      std::optional<estimator::EstimatorTrace> trace;
      std::optional<convergence::ConvergenceReport> report;
      std::string error;
    };
    std::vector<Outcome> outcomes(segments.size());
    parallel_for(segments.size(), [&](std::size_t i) {
      try {
        outcomes[i].trace = estimator::run(segments[i], cfg, ecfg);
        outcomes[i].report = convergence::assess(*outcomes[i].trace);
      } catch (const NumericError& e) {
        outcomes[i].error = e.what();
      }
    });

    Manifest m;
    m.command = "identify";
    m.flags = flags_json(a.est);
    if (!a.aircraft.empty()) m.configs = {a.aircraft};
    m.seed = a.est.seed;
    m.inputs = a.segments;

    int code = kOk;
    json failures = json::array();
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto stem = fs::path(a.segments[i]).stem().string();
      const auto& seg = segments[i];
      const auto& o = outcomes[i];
      if (!o.trace) {
        std::cerr << "cgeem: " << seg.flight_id << ": numeric failure: " << o.error << '\n';
        failures.push_back({{"flight_id", seg.flight_id}, {"error", o.error}});
        code = kNumericFailure;
        continue;
      }
      fleet::FlightResult result{seg.flight_id, seg.tail_id, seg.aircraft_type, *o.report};
      json j = io::to_json(result);
      j["estimator"] = io::to_json(ecfg);
      j["aircraft"] = io::to_json(cfg);
      j["steps"] = o.trace->steps();
      j["final_theta"] = io::params_to_json(o.trace->param_names, o.trace->final_theta());
      io::write_json(dir / (stem + ".result.json"), j);
      write_trace(dir / (stem + ".trace.csv"), *o.trace);
      m.outputs.push_back(stem + ".result.json");
      m.outputs.push_back(stem + ".trace.csv");

      std::cout << seg.flight_id << ": " << (o.report->converged ? "converged" : "flagged");
      if (!o.report->converged) {
        std::cout << " (";
        const auto failing = o.report->failing();
        for (std::size_t k = 0; k < failing.size(); ++k) std::cout << (k ? ", " : "") << failing[k];
        std::cout << ')';
        if (code == kOk) code = kFlagged;
      }
      std::cout << '\n';
    }
    if (!failures.empty()) m.flags["failures"] = failures;
    m.write(dir);
    return code;
  });
}

int cmd_compare(const CompareArgs& a) {
  return guarded([&] {
    const auto cfg = load_config(a.aircraft);
    const auto ecfg = estimator_config(a.est);
    const auto segment = load_segment(a.segment);
    const auto dir = prepare_out_dir(a.out_dir);

    const auto report = estimator::compare_estimators(segment, cfg, ecfg);
    io::write_json(dir / "comparison.json", io::to_json(report));
    {
      auto out = open_out(dir / "gain_norms.csv");
      io::write_gain_csv(out, report);
    }

    Manifest m;
    m.command = "compare";
    m.flags = flags_json(a.est);
    if (!a.aircraft.empty()) m.configs = {a.aircraft};
    m.seed = a.est.seed;
    m.inputs = {a.segment};
    m.outputs = {"comparison.json", "gain_norms.csv"};
    bool any_ok = false;
    for (const auto& row : report.rows) {
      std::cout << row.label << ": ";
      if (!row.ok()) {
        std::cout << "failed: " << row.error << '\n';
        continue;
      }
      any_ok = true;
      const auto name = "trace_" + row.label + ".csv";
      write_trace(dir / name, *row.trace);
      m.outputs.push_back(name);
      std::cout << (row.report->converged ? "converged" : "flagged")
                << ", gain min/max = " << row.gain_ratio << '\n';
    }
    m.write(dir);
    return any_ok ? int{kOk} : int{kNumericFailure};
  });
}

int cmd_extract(const ExtractArgs& a) {
  return guarded([&] {
    require_file(a.flight);
    const auto& schema = flight_data::builtin_schema();
    const auto table = flight_data::load_channel_table(a.flight, schema);
    auto flight = flight_data::align_and_convert(table, schema, a.criteria.grid_rate_hz);
    flight.flight_id = a.flight_id.empty() ? fs::path(a.flight).stem().string() : a.flight_id;
    flight.tail_id = a.tail_id;
    flight.aircraft_type = a.aircraft_type;
    const auto segments = flight_data::detect_cruise_segments(flight, a.criteria);
    const auto dir = prepare_out_dir(a.out_dir);

    Manifest m;
    m.command = "extract";
    m.flags = {{"grid_hz", a.criteria.grid_rate_hz},
               {"gamma_max_deg", a.criteria.gamma_max_deg},
               {"q_max_deg_s", a.criteria.q_max_deg_s},
               {"v_std_max_mps", a.criteria.v_std_max_mps},
               {"v_std_window_s", a.criteria.v_std_window_s},
               {"min_duration_s", a.criteria.min_duration_s}};
    m.inputs = {a.flight};
    for (std::size_t i = 0; i < segments.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "segment_%03zu.csv", i);
      flight_data::write_segment_csv(dir / name, segments[i]);
      m.outputs.push_back(name);
    }
    if (!table.absent_optional.empty()) m.flags["absent_optional"] = table.absent_optional;
    m.write(dir);
    std::cout << segments.size() << " cruise segment(s)\n";
    return int{kOk};
  });
}

int cmd_fleet(const FleetArgs& a) {
  return guarded([&] {
    if (!fs::is_directory(a.results_dir)) {
      throw ConfigError("results directory '" + a.results_dir + "' does not exist");
    }
    if (a.bins && *a.bins == 0) throw ConfigError("--bins must be positive");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.results_dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
      if (entry.path().filename() == "manifest.json") continue;
      files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<fleet::FlightResult> results(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
      try {
        results[i] = io::flight_result_from_json(io::read_json(files[i]));
      } catch (const ConfigError& e) {
        throw ConfigError(files[i].string() + ": " + e.what());
      }
    });

    const auto dir = prepare_out_dir(a.out_dir);
    const auto summary = fleet::aggregate(results);
    json j = io::to_json(summary);
    if (summary.types.size() >= 2) {
      json rows = json::array();
      for (const auto& r : fleet::cross_type_compare(summary)) {
        rows.push_back({{"aircraft_type", r.aircraft_type},
                        {"mean_cd0", r.mean_cd0},
                        {"mean_cdl", r.mean_cdl},
                        {"tie_with_next", r.tie_with_next}});
      }
      j["cd0_ordering"] = rows;
    }
    try {
      j["pearson_cd0_cdl_all"] = fleet::correlation_cd0_cdl(results);
    } catch (const Error&) {
      j["pearson_cd0_cdl_all"] = nullptr;
    }
    io::write_json(dir / "fleet_summary.json", j);
    {
      auto out = open_out(dir / "fleet_table.csv");
      io::write_fleet_table_csv(out, fleet::type_table(summary));
    }
    {
      auto out = open_out(dir / "flagged.csv");
      io::write_flagged_csv(out, summary.flagged);
    }

    Manifest m;
    m.command = "fleet";
    m.flags = {{"bins", a.bins ? json(*a.bins) : json("sturges")}};
    m.inputs = {a.results_dir};
    m.outputs = {"fleet_summary.json", "fleet_table.csv", "flagged.csv"};

    // Histograms over every converged flight that carries the parameter.
    std::map<std::string, std::vector<double>> values;
    std::vector<const fleet::FlightResult*> sorted;
    for (const auto& r : results) {
      if (r.converged()) sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto* x, const auto* y) {
      return x->flight_id < y->flight_id;
    });
    for (const auto* r : sorted) {
      const auto names = r->param_names();
      for (std::size_t i = 0; i < names.size(); ++i) {
        values[names[i]].push_back(r->representative()[static_cast<int>(i)]);
      }
    }
    for (const auto& [name, xs] : values) {
      const auto bins = a.bins.value_or(fleet::sturges_bins(xs.size()));
      const auto file = "histogram_" + name + ".csv";
      auto out = open_out(dir / file);
      io::write_histogram_csv(out, fleet::histogram(xs, bins));
      m.outputs.push_back(file);
    }
    m.write(dir);

    std::size_t converged = 0;
    for (const auto& t : summary.types) converged += t.count;
    std::cout << results.size() << " result(s), " << converged << " aggregated, "
              << summary.flagged.size() << " flagged\n";
    return int{kOk};
  });
}

int cmd_sweep(const SweepArgs& a) {
  return guarded([&] {
    require_file(a.scenario);
    auto sc = io::load_scenario(a.scenario);
    if (a.est.seed) sc.seed = *a.est.seed;
    auto ecfg = estimator_config(a.est);
    if (ecfg.drag_model != sc.drag_model) {
      throw ConfigError("--drag-model must match the scenario drag model");
    }
    if (a.scales.empty()) throw ConfigError("at least one scale is required");
    for (double s : a.scales) {
      if (!(s >= 0.0)) throw ConfigError("scales must be non-negative");
    }
    const auto dir = prepare_out_dir(a.out_dir);
    const auto sweep = simgen::noise_sweep(sc, a.scales, ecfg);
    io::write_json(dir / "sweep.json", io::to_json(sweep, aero::param_names(sc.drag_model)));

    Manifest m;
    m.command = "sweep";
    m.flags = flags_json(a.est);
    m.flags["scales"] = a.scales;
    m.configs = {a.scenario};
    m.seed = sc.seed;
    m.inputs = {a.scenario};
    m.outputs = {"sweep.json"};
    m.write(dir);
    return int{kOk};
  });
}

}  // namespace cgeem::cli
