#include "cgeem/serialization.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include "cgeem/csv.hpp"
#include "cgeem/errors.hpp"

namespace cgeem::io {

namespace {

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view what) {
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(what));
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json noise_to_json(const simgen::ChannelNoise& c) { return {{"sigma", c.sigma}, {"step", c.step}}; }

simgen::ChannelNoise noise_from_json(const json& j, simgen::ChannelNoise fallback) {
  require_object(j, "noise channel");
  reject_unknown(j, {"sigma", "step"}, "noise channel");
  return {get_or(j, "sigma", fallback.sigma), get_or(j, "step", fallback.step)};
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

json to_json(const aero::AircraftConfig& cfg) {
  return {
      {"wing_area_m2", cfg.wing_area},
      {"sigma_rad", cfg.sigma},
      {"t0_tsfc", cfg.t0},
      {"tsfc_unit", cfg.tsfc_unit == aero::TsfcUnit::kPerHour ? "kg_per_N_h" : "kg_per_N_s"},
      {"rho_mode", cfg.rho_mode == aero::RhoMode::kFixed ? "fixed" : "isa"},
      {"rho_fixed", cfg.rho_fixed},
      {"pressure_altitude_m", cfg.pressure_altitude_m},
  };
}

aero::AircraftConfig aircraft_config_from_json(const json& j) {
  require_object(j, "aircraft config");
  reject_unknown(j,
                 {"wing_area_m2", "sigma_rad", "t0_tsfc", "tsfc_unit", "rho_mode", "rho_fixed",
                  "pressure_altitude_m", "aircraft_type"},
                 "aircraft config");
  aero::AircraftConfig cfg;
  cfg.wing_area = get_or(j, "wing_area_m2", cfg.wing_area);
  cfg.sigma = get_or(j, "sigma_rad", cfg.sigma);
  cfg.t0 = get_or(j, "t0_tsfc", cfg.t0);
  const auto unit = get_or<std::string>(j, "tsfc_unit", "kg_per_N_h");
  if (unit == "kg_per_N_h") {
    cfg.tsfc_unit = aero::TsfcUnit::kPerHour;
  } else if (unit == "kg_per_N_s") {
    cfg.tsfc_unit = aero::TsfcUnit::kPerSecond;
  } else {
    throw ConfigError("tsfc_unit must be kg_per_N_h or kg_per_N_s");
  }
  const auto mode = get_or<std::string>(j, "rho_mode", "fixed");
  if (mode == "fixed") {
    cfg.rho_mode = aero::RhoMode::kFixed;
  } else if (mode == "isa") {
    cfg.rho_mode = aero::RhoMode::kIsa;
  } else {
    throw ConfigError("rho_mode must be fixed or isa");
  }
  cfg.rho_fixed = get_or(j, "rho_fixed", cfg.rho_fixed);
  cfg.pressure_altitude_m = get_or(j, "pressure_altitude_m", cfg.pressure_altitude_m);
  cfg.validate();
  return cfg;
}

aero::AircraftConfig load_aircraft_config(const std::filesystem::path& path) {
  return aircraft_config_from_json(read_json(path));
}

json params_to_json(const std::vector<std::string>& names, const Eigen::VectorXd& v) {
  json out = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = v[static_cast<int>(i)];
  return out;
}

Eigen::VectorXd params_from_json(const json& j, const std::vector<std::string>& names) {
  Eigen::VectorXd v(static_cast<int>(names.size()));
  if (j.is_array()) {
    if (j.size() != names.size()) throw ConfigError("parameter array has the wrong length");
    for (std::size_t i = 0; i < names.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
  }
  require_object(j, "parameter set");
  if (j.size() != names.size()) throw ConfigError("parameter object has the wrong keys");
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = j.find(names[i]);
    if (it == j.end() || !it->is_number()) {
      throw ConfigError("parameter '" + names[i] + "' missing or not a number");
    }
    v[static_cast<int>(i)] = it->get<double>();
  }
  return v;
}

json to_json(const simgen::SimScenario& sc) {
  const auto& p = sc.profile;
  const auto& n = sc.noise;
  return {
      {"truth", params_to_json(aero::param_names(sc.drag_model), sc.truth)},
      {"drag_model", aero::to_string(sc.drag_model)},
      {"aircraft", to_json(sc.cfg)},
      {"profile",
       {{"v_mean", p.v_mean},
        {"v_amplitude", p.v_amplitude},
        {"v_period_s", p.v_period_s},
        {"alpha_mean_deg", p.alpha_mean_deg},
        {"alpha_amplitude_deg", p.alpha_amplitude_deg},
        {"alpha_period_s", p.alpha_period_s},
        {"gamma_deg", p.gamma_deg},
        {"mass0_kg", p.mass0},
        {"fuel_flow_kg_s", p.fuel_flow},
        {"tat_k", p.tat}}},
      {"noise",
       {{"alpha", noise_to_json(n.alpha)},
        {"q", noise_to_json(n.q)},
        {"theta", noise_to_json(n.theta)},
        {"V", noise_to_json(n.V)},
        {"gamma", noise_to_json(n.gamma)},
        {"a_x", noise_to_json(n.a_x)},
        {"a_z", noise_to_json(n.a_z)},
        {"mass", noise_to_json(n.mass)},
        {"fuel_flow", noise_to_json(n.fuel_flow)},
        {"tat", noise_to_json(n.tat)}}},
      {"noise_scale", sc.noise_scale},
      {"seed", sc.seed},
      {"duration_s", sc.duration_s},
      {"rate_hz", sc.rate_hz},
      {"flight_id", sc.flight_id},
      {"tail_id", sc.tail_id},
      {"aircraft_type", sc.aircraft_type},
  };
}

simgen::SimScenario scenario_from_json(const json& j) {
  require_object(j, "scenario");
  reject_unknown(j,
                 {"truth", "drag_model", "aircraft", "profile", "noise", "noise_scale", "seed",
                  "duration_s", "rate_hz", "flight_id", "tail_id", "aircraft_type"},
                 "scenario");
  simgen::SimScenario sc;
  try {
    sc.drag_model = aero::parse_drag_model(get_or<std::string>(j, "drag_model", "polar"));
    if (j.contains("truth")) {
      sc.truth = params_from_json(j["truth"], aero::param_names(sc.drag_model));
    } else if (sc.drag_model == aero::DragModel::kLinear) {
      throw ConfigError("the linear drag model needs an explicit truth vector");
    }
    if (j.contains("aircraft")) sc.cfg = aircraft_config_from_json(j["aircraft"]);

    if (j.contains("profile")) {
      const auto& p = j["profile"];
      require_object(p, "profile");
      reject_unknown(p,
                     {"v_mean", "v_amplitude", "v_period_s", "alpha_mean_deg",
                      "alpha_amplitude_deg", "alpha_period_s", "gamma_deg", "mass0_kg",
                      "fuel_flow_kg_s", "tat_k"},
                     "profile");
      auto& pr = sc.profile;
      pr.v_mean = get_or(p, "v_mean", pr.v_mean);
      pr.v_amplitude = get_or(p, "v_amplitude", pr.v_amplitude);
      pr.v_period_s = get_or(p, "v_period_s", pr.v_period_s);
      pr.alpha_mean_deg = get_or(p, "alpha_mean_deg", pr.alpha_mean_deg);
      pr.alpha_amplitude_deg = get_or(p, "alpha_amplitude_deg", pr.alpha_amplitude_deg);
      pr.alpha_period_s = get_or(p, "alpha_period_s", pr.alpha_period_s);
      pr.gamma_deg = get_or(p, "gamma_deg", pr.gamma_deg);
      pr.mass0 = get_or(p, "mass0_kg", pr.mass0);
      pr.fuel_flow = get_or(p, "fuel_flow_kg_s", pr.fuel_flow);
      pr.tat = get_or(p, "tat_k", pr.tat);
      if (!(pr.v_period_s > 0.0 && pr.alpha_period_s > 0.0)) {
        throw ConfigError("profile periods must be positive");
      }
      if (!(pr.v_mean > 0.0 && pr.mass0 > 0.0 && pr.tat > 0.0 && pr.fuel_flow >= 0.0)) {
        throw ConfigError("profile has a non-physical mean state");
      }
    }

    if (j.contains("noise")) {
      const auto& n = j["noise"];
      if (n.is_string()) {
        const auto name = n.get<std::string>();
        if (name == "recorder_default") {
          sc.noise = simgen::NoiseSpec::recorder_default();
        } else if (name == "none") {
          sc.noise = simgen::NoiseSpec::none();
        } else {
          throw ConfigError("noise must be recorder_default, none or an object");
        }
      } else {
        require_object(n, "noise");
        reject_unknown(n,
                       {"alpha", "q", "theta", "V", "gamma", "a_x", "a_z", "mass", "fuel_flow",
                        "tat"},
                       "noise");
        auto& ns = sc.noise;
        const auto d = simgen::NoiseSpec::recorder_default();
        ns.alpha = n.contains("alpha") ? noise_from_json(n["alpha"], d.alpha) : d.alpha;
        ns.q = n.contains("q") ? noise_from_json(n["q"], d.q) : d.q;
        ns.theta = n.contains("theta") ? noise_from_json(n["theta"], d.theta) : d.theta;
        ns.V = n.contains("V") ? noise_from_json(n["V"], d.V) : d.V;
        ns.gamma = n.contains("gamma") ? noise_from_json(n["gamma"], d.gamma) : d.gamma;
        ns.a_x = n.contains("a_x") ? noise_from_json(n["a_x"], d.a_x) : d.a_x;
        ns.a_z = n.contains("a_z") ? noise_from_json(n["a_z"], d.a_z) : d.a_z;
        ns.mass = n.contains("mass") ? noise_from_json(n["mass"], d.mass) : d.mass;
        ns.fuel_flow =
            n.contains("fuel_flow") ? noise_from_json(n["fuel_flow"], d.fuel_flow) : d.fuel_flow;
        ns.tat = n.contains("tat") ? noise_from_json(n["tat"], d.tat) : d.tat;
      }
    }
    sc.noise_scale = get_or(j, "noise_scale", sc.noise_scale);
    sc.seed = get_or(j, "seed", sc.seed);
    sc.duration_s = get_or(j, "duration_s", sc.duration_s);
    sc.rate_hz = get_or(j, "rate_hz", sc.rate_hz);
    sc.flight_id = get_or(j, "flight_id", sc.flight_id);
    sc.tail_id = get_or(j, "tail_id", sc.tail_id);
    sc.aircraft_type = get_or(j, "aircraft_type", sc.aircraft_type);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  sc.validate();
  return sc;
}

simgen::SimScenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json(path));
}

json to_json(const estimator::EstimatorConfig& ecfg) {
  json j = {
      {"estimator", estimator::to_string(ecfg.kind)},
      {"lambda", ecfg.lambda},
      {"drag_model", aero::to_string(ecfg.drag_model)},
      {"channels", ecfg.channels == estimator::ChannelSet::kFull ? "full" : "accel"},
      {"jacobian_step", ecfg.jacobian_step},
  };
  if (ecfg.p0.size() == 0) {
    j["p0_scale"] = ecfg.p0_scale;
  } else {
    j["p0"] = json::array();
    for (int r = 0; r < ecfg.p0.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < ecfg.p0.cols(); ++c) row.push_back(ecfg.p0(r, c));
      j["p0"].push_back(row);
    }
  }
  if (ecfg.r_diag.size() == 0) {
    j["r_scale"] = ecfg.r_scale;
  } else {
    j["r_diag"] = std::vector<double>(ecfg.r_diag.data(), ecfg.r_diag.data() + ecfg.r_diag.size());
  }
  if (ecfg.theta0.size() != 0) {
    j["theta0"] = std::vector<double>(ecfg.theta0.data(), ecfg.theta0.data() + ecfg.theta0.size());
  }
  return j;
}

json to_json(const convergence::ConvergenceReport& r) {
  json params = json::array();
  std::vector<std::string> names;
  for (const auto& p : r.params) {
    names.push_back(p.name);
    params.push_back({
        {"name", p.name},
        {"group", convergence::to_string(p.group)},
        {"mean", p.mean},
        {"std", p.std},
        {"cv", finite_or_null(p.cv)},
        {"threshold", p.threshold},
        {"pass", p.pass},
        {"degenerate", p.degenerate},
    });
  }
  return {
      {"window_start", r.window.start},
      {"window_end", r.window.end},
      {"drag_model", aero::to_string(r.drag_model)},
      {"verdict", r.converged ? "converged" : "flagged"},
      {"parameters", params},
      {"failing", r.failing()},
      {"representative",
       r.representative ? params_to_json(names, *r.representative) : json(nullptr)},
  };
}

convergence::ConvergenceReport report_from_json(const json& j) {
  require_object(j, "convergence report");
  convergence::ConvergenceReport r;
  try {
    r.window.start = j.at("window_start").get<std::size_t>();
    r.window.end = j.at("window_end").get<std::size_t>();
    r.drag_model = aero::parse_drag_model(j.at("drag_model").get<std::string>());
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict != "converged" && verdict != "flagged") throw ConfigError("unknown verdict");
    r.converged = verdict == "converged";
    const auto groups = convergence::parameter_groups(r.drag_model);
    const auto& params = j.at("parameters");
    if (!params.is_array() || params.size() != groups.size()) {
      throw ConfigError("parameter list does not match the drag model");
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& p = params[i];
      convergence::ParameterStat st;
      st.name = p.at("name").get<std::string>();
      st.group = groups[i];
      st.mean = p.at("mean").get<double>();
      st.std = p.at("std").get<double>();
      st.cv = number_or_inf(p.at("cv"));
      st.threshold = p.at("threshold").get<double>();
      st.pass = p.at("pass").get<bool>();
      st.degenerate = get_or(p, "degenerate", false);
      names.push_back(st.name);
      r.params.push_back(std::move(st));
    }
    const auto& rep = j.at("representative");
    if (!rep.is_null()) r.representative = params_from_json(rep, names);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid convergence report: ") + e.what());
  }
  if (r.converged && !r.representative) {
    throw ConfigError("converged report lacks representative values");
  }
  return r;
}

json to_json(const fleet::FlightResult& r) {
  return {
      {"flight_id", r.flight_id},
      {"tail_id", r.tail_id},
      {"aircraft_type", r.aircraft_type},
      {"convergence", to_json(r.report)},
  };
}

fleet::FlightResult flight_result_from_json(const json& j) {
  require_object(j, "flight result");
  fleet::FlightResult r;
  try {
    r.flight_id = j.at("flight_id").get<std::string>();
    r.tail_id = get_or<std::string>(j, "tail_id", "");
    r.aircraft_type = j.at("aircraft_type").get<std::string>();
    r.report = report_from_json(j.at("convergence"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid flight result: ") + e.what());
  }
  return r;
}

json to_json(const fleet::FleetSummary& s) {
  json types = json::array();
  for (const auto& t : s.types) {
    json params = json::array();
    for (const auto& p : t.params) {
      params.push_back({{"name", p.name},
                        {"count", p.count},
                        {"mean", p.mean},
                        {"std", p.std},
                        {"max", p.max},
                        {"min", p.min}});
    }
    types.push_back({
        {"aircraft_type", t.aircraft_type},
        {"flights", t.count},
        {"parameters", params},
        {"pearson_cd0_cdl",
         t.pearson_cd0_cdl ? json(*t.pearson_cd0_cdl) : json(nullptr)},
    });
  }
  json flagged = json::array();
  for (const auto& f : s.flagged) {
    flagged.push_back(
        {{"flight_id", f.flight_id}, {"aircraft_type", f.aircraft_type}, {"failing", f.failing}});
  }
  return {{"types", types}, {"flagged", flagged}, {"notes", s.notes}};
}

json to_json(const estimator::ComparisonReport& c) {
  json rows = json::array();
  for (const auto& row : c.rows) {
    json r = {
        {"label", row.label},
        {"estimator", estimator::to_string(row.kind)},
        {"lambda", row.lambda},
        {"ok", row.ok()},
    };
    if (row.ok()) {
      const auto& t = *row.trace;
      r["steps"] = t.steps();
      r["final_theta"] = params_to_json(t.param_names, t.final_theta());
      r["gain_ratio"] = row.gain_ratio;
      r["gain_norm_first"] = t.gain_norm.front();
      r["gain_norm_last"] = t.gain_norm.back();
      r["convergence"] = to_json(*row.report);
    } else {
      r["error"] = row.error;
      r["failed_step"] = row.failed_step ? json(*row.failed_step) : json(nullptr);
    }
    rows.push_back(r);
  }
  return {{"estimators", rows}};
}

json to_json(const std::vector<simgen::SweepRecord>& sweep, const std::vector<std::string>& names) {
  json rows = json::array();
  for (const auto& s : sweep) {
    json r = {{"scale", s.scale}, {"seed", s.seed}, {"ok", s.ok}};
    if (s.ok) {
      r["estimate"] = params_to_json(names, s.estimate);
      r["relative_error"] = params_to_json(names, s.rel_error);
      json cv = json::object();
      for (std::size_t i = 0; i < names.size(); ++i) cv[names[i]] = finite_or_null(s.cv[i]);
      r["cv"] = cv;
      r["converged"] = s.converged;
    } else {
      r["error"] = s.error;
    }
    rows.push_back(r);
  }
  return {{"sweep", rows}};
}

void write_trace_csv(std::ostream& out, const estimator::EstimatorTrace& trace) {
  const auto n = trace.param_names.size();
  out << 'k';
  for (std::size_t i = 0; i < n; ++i) out << ",theta_" << i;
  out << ",e_ax,e_az,gain_norm\n";
  for (std::size_t k = 0; k < trace.steps(); ++k) {
    out << k;
    for (std::size_t i = 0; i < n; ++i) {
      out << ',' << csv::format_double(trace.theta[k][static_cast<int>(i)]);
    }
    out << ',' << csv::format_double(trace.residual[k][4]) << ','
        << csv::format_double(trace.residual[k][5]) << ','
        << csv::format_double(trace.gain_norm[k]) << '\n';
  }
}

void write_gain_csv(std::ostream& out, const estimator::ComparisonReport& c) {
  std::vector<const estimator::ComparisonEntry*> ok;
  out << 'k';
  for (const auto& row : c.rows) {
    if (!row.ok()) continue;
    ok.push_back(&row);
    out << ',' << row.label;
  }
  out << '\n';
  if (ok.empty()) return;
  const auto steps = ok.front()->trace->steps();
  for (std::size_t k = 0; k < steps; ++k) {
    out << k;
    for (const auto* row : ok) out << ',' << csv::format_double(row->trace->gain_norm[k]);
    out << '\n';
  }
}

void write_flagged_csv(std::ostream& out, const std::vector<fleet::FlaggedFlight>& flagged) {
  out << "flight_id,failing_parameters\n";
  for (const auto& f : flagged) {
    std::string failing;
    for (std::size_t i = 0; i < f.failing.size(); ++i) {
      failing += (i ? ";" : "") + f.failing[i];
    }
    out << f.flight_id << ',' << failing << '\n';
  }
}

void write_fleet_table_csv(std::ostream& out, const std::vector<fleet::TypeComparison>& rows) {
  out << "aircraft_type,flights,mean_cd0,std_cd0,mean_cdl,std_cdl\n";
  for (const auto& r : rows) {
    out << r.aircraft_type << ',' << r.flights << ',' << csv::format_sig(r.mean_cd0, 4) << ','
        << csv::format_sig(r.std_cd0, 4) << ',' << csv::format_sig(r.mean_cdl, 4) << ','
        << csv::format_sig(r.std_cdl, 4) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const fleet::Histogram& h) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << csv::format_double(h.edges[i]) << ',' << csv::format_double(h.edges[i + 1]) << ','
        << h.counts[i] << '\n';
  }
}

}  // namespace cgeem::io
