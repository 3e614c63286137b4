// Prints one PASS/FAIL line per acceptance criterion; nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "analytic_jacobian.hpp"
#include "cgeem/convergence.hpp"
#include "cgeem/errors.hpp"
#include "cgeem/estimator.hpp"
#include "cgeem/fleet.hpp"
#include "cgeem/flight_data.hpp"
#include "cgeem/serialization.hpp"
#include "cgeem/simgen.hpp"
#include "random_points.hpp"

namespace fs = std::filesystem;
using namespace cgeem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Eigen::VectorXd truth() { return aero::AeroParameters::a321_reference().to_vector(); }

const std::vector<std::string>& names() {
  static const auto n = aero::param_names(aero::DragModel::kPolar);
  return n;
}

flight_data::FlightSegment reference_segment() { return simgen::simulate(simgen::SimScenario{}); }

double rel(double est, double ref) { return std::abs(est - ref) / std::abs(ref); }

// 1. zero-noise round trip
Outcome zero_noise_round_trip() {
  simgen::SimScenario sc;
  sc.noise = simgen::NoiseSpec::none();
  const auto seg = simgen::simulate(sc);
  const auto t0 = Clock::now();
  const auto trace = estimator::run_cg_eem(seg, sc.cfg, estimator::EstimatorConfig{});
  const double dt = seconds_since(t0);
  double worst = 0.0;
  std::string worst_name;
  for (int i = 0; i < 6; ++i) {
    const double e = rel(trace.final_theta()[i], sc.truth[i]);
    if (e > worst) {
      worst = e;
      worst_name = names()[static_cast<std::size_t>(i)];
    }
  }
  return {worst < 1e-3 && dt < 1.0,
          "max rel error " + fmt("%.4g", worst) + " (" + worst_name + "), limit 0.001; runtime " +
              fmt("%.3f", dt) + " s, limit 1 s"};
}

// 2. tiered accuracy under the default noise
Outcome noisy_verification() {
  const auto t0 = Clock::now();
  const auto seg = reference_segment();
  const auto trace = estimator::run_cg_eem(seg, aero::AircraftConfig{}, estimator::EstimatorConfig{});
  const auto report = convergence::assess(trace);
  const double dt = seconds_since(t0);
  // accuracy and CV limits per parameter
  const std::vector<std::pair<double, double>> limits{{0.02, 0.01}, {0.02, 0.01}, {0.02, 0.01},
                                                      {0.40, 0.10}, {0.40, 0.10}, {0.20, 0.01}};
  bool ok = dt < 5.0;
  std::ostringstream d;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& p = report.params[i];
    const double e = rel(p.mean, truth()[static_cast<int>(i)]);
    const bool pass = e < limits[i].first && p.cv < limits[i].second;
    ok = ok && pass;
    d << names()[i] << " err " << fmt("%.3g", e) << "/cv " << fmt("%.3g", p.cv) << (pass ? "" : "!")
      << "; ";
  }
  d << "runtime " << fmt("%.3f", dt) << " s";
  return {ok, d.str()};
}

// 3. constant vs decaying gain
Outcome gain_behaviour() {
  const auto seg = reference_segment();
  const aero::AircraftConfig cfg;
  const auto cg = estimator::run_cg_eem(seg, cfg, estimator::EstimatorConfig{});
  estimator::EstimatorConfig r;
  r.kind = estimator::EstimatorKind::kRls;
  const auto rls = estimator::run_rls(seg, cfg, r);
  const double cg_ratio = estimator::gain_ratio(cg);
  const double g10 = rls.gain_norm[9];
  const double glast = rls.gain_norm.back();

  double scalar_err = 0.0;
  Eigen::MatrixXd P = Eigen::MatrixXd::Constant(1, 1, 100.0);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
  for (int k = 1; k <= 10; ++k) {
    const auto u = estimator::rls_update(one, P, one, 1.0);
    const double expected = 100.0 / (1.0 + 100.0 * k);
    scalar_err = std::max(scalar_err, rel(u.K(0, 0), expected));
    P = u.P;
  }
  const bool ok = cg_ratio > 0.5 && glast < 0.1 * g10 && scalar_err <= 1e-12;
  return {ok, "CG min/max " + fmt("%.3f", cg_ratio) + " (>0.5); RLS last/step10 " +
                  fmt("%.4f", glast / g10) + " (<0.1); scalar closed-form rel err " +
                  fmt("%.2g", scalar_err)};
}

// 4. insensitivity to R
Outcome r_robustness() {
  const auto t0 = Clock::now();
  const auto seg = reference_segment();
  std::vector<Eigen::VectorXd> finals;
  for (double r : {1e-3, 1e-1, 1e1}) {
    estimator::EstimatorConfig e;
    e.p0_scale = 100.0;
    e.r_scale = r;
    finals.push_back(estimator::run_cg_eem(seg, aero::AircraftConfig{}, e).final_theta());
  }
  const double dt = seconds_since(t0);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    double lo = finals[0][i], hi = finals[0][i];
    for (const auto& f : finals) {
      lo = std::min(lo, f[i]);
      hi = std::max(hi, f[i]);
    }
    worst = std::max(worst, (hi - lo) / std::abs(finals[1][i]));
  }
  return {worst < 0.05 && dt < 15.0,
          "max relative spread " + fmt("%.3g", worst) + " (<0.05); runtime " + fmt("%.3f", dt) + " s"};
}

// 5. drag-model ablation
Outcome drag_ablation() {
  const auto seg = reference_segment();
  const aero::AircraftConfig cfg;
  estimator::EstimatorConfig lin;
  lin.drag_model = aero::DragModel::kLinear;
  const auto polar = convergence::assess(estimator::run_cg_eem(seg, cfg, estimator::EstimatorConfig{}));
  const auto linear = convergence::assess(estimator::run_cg_eem(seg, cfg, lin));
  const auto& dv = linear.at("C_DV");
  const auto& da = linear.at("C_Dalpha");
  const bool linear_fails = (!dv.pass || !da.pass) && !linear.converged;
  std::string polar_failing;
  for (const auto& n : polar.failing()) polar_failing += n + " ";
  return {linear_fails && polar.converged,
          "linear C_DV cv " + fmt("%.3g", dv.cv) + ", C_Dalpha cv " + fmt("%.3g", da.cv) + " -> " +
              (linear.converged ? "converged" : "flagged") + "; polar " +
              (polar.converged ? "converged" : "flagged (" + polar_failing + ")")};
}

// 6. finite-difference Jacobian against analytic partials
Outcome jacobian_accuracy() {
  test_support::PointGenerator gen(20240611);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto pt = gen.polar();
    const aero::MeasurementModel m(pt.cfg);
    worst = std::max(worst, test_support::row_scaled_error(m.jacobian(pt.theta, pt.sample),
                                                      test_support::analytic_jacobian(m, pt.theta, pt.sample)));
  }
  return {worst < 1e-6, "max relative error " + fmt("%.3g", worst) + " over 100 points (<1e-6)"};
}

// 7. passthrough channels do not change the trace
Outcome channel_equivalence() {
  std::vector<flight_data::FlightSegment> segs{simgen::simulate_clean(simgen::SimScenario{})};
  for (std::uint64_t s : {20240611ull, 1ull, 2ull, 3ull}) {
    simgen::SimScenario sc;
    sc.seed = s;
    segs.push_back(simgen::simulate(sc));
  }
  simgen::SimScenario loud;
  loud.noise_scale = 5.0;
  segs.push_back(simgen::simulate(loud));
  double worst = 0.0;
  bool mismatched = false;
  int failed_runs = 0;
  for (const auto& seg : segs) {
    for (auto kind : {estimator::EstimatorKind::kConstantGain, estimator::EstimatorKind::kRls}) {
      estimator::EstimatorConfig full, reduced;
      full.kind = reduced.kind = kind;
      reduced.channels = estimator::ChannelSet::kAccelOnly;
      // a run that fails must fail at the same step either way
      std::optional<estimator::EstimatorTrace> a, b;
      std::optional<std::size_t> fa, fb;
      try {
        a = estimator::run(seg, aero::AircraftConfig{}, full);
      } catch (const StepError& e) {
        fa = e.step();
      }
      try {
        b = estimator::run(seg, aero::AircraftConfig{}, reduced);
      } catch (const StepError& e) {
        fb = e.step();
      }
      if (fa != fb || a.has_value() != b.has_value()) {
        mismatched = true;
        continue;
      }
      if (fa) {
        ++failed_runs;
        continue;
      }
      for (std::size_t k = 0; k < a->steps(); ++k) {
        worst = std::max(worst, (a->theta[k] - b->theta[k]).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst <= 1e-12 && !mismatched,
          "max |theta_6ch - theta_2ch| " + fmt("%.3g", worst) + " over " + std::to_string(segs.size() * 2) +
              " runs (<=1e-12); " + std::to_string(failed_runs) + " run(s) failed at the same step both ways" +
              (mismatched ? "; outcome MISMATCH" : "")};
}

// 8. convergence mechanics
Outcome convergence_mechanics() {
  const auto w = convergence::convergence_window(100);
  const std::vector<double> abc{1, 2, 3};
  const double cv = convergence::coefficient_of_variation(abc);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(2.0, 0.3);
  std::vector<double> x(500);
  for (auto& v : x) v = n(rng);
  const double base = convergence::coefficient_of_variation(x);
  double worst = 0.0;
  for (double k : {1e-9, 1e-3, 0.5, 3.0, 1e6}) {
    std::vector<double> y;
    for (double v : x) y.push_back(k * v);
    worst = std::max(worst, std::abs(convergence::coefficient_of_variation(y) - base));
  }
  const bool ok = w.start == 60 && w.end == 100 && std::abs(cv - 0.5) < 1e-15 && worst < 1e-12;
  return {ok, "window [" + std::to_string(w.start) + "," + std::to_string(w.end) + "), CV[1,2,3] " +
                  fmt("%.17g", cv) + ", scale drift " + fmt("%.2g", worst)};
}

fleet::FlightResult synthetic_result(const std::string& id, const Eigen::VectorXd& theta) {
  fleet::FlightResult r;
  r.flight_id = id;
  r.aircraft_type = "A321";
  r.report.window = {121, 201};
  for (std::size_t i = 0; i < names().size(); ++i) {
    convergence::ParameterStat p;
    p.name = names()[i];
    p.mean = theta[static_cast<int>(i)];
    p.pass = true;
    r.report.params.push_back(p);
  }
  r.report.converged = true;
  r.report.representative = theta;
  return r;
}

// 9. fleet statistics
Outcome fleet_statistics() {
  const std::vector<double> sd{0.0374, 0.0060, 0.0294, 0.0076, 0.0011, 0.0042};
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<fleet::FlightResult> ensemble;
  for (int f = 0; f < 30; ++f) {
    Eigen::VectorXd th = truth();
    for (int i = 0; i < 6; ++i) th[i] += sd[static_cast<std::size_t>(i)] * n(rng);
    ensemble.push_back(synthetic_result("E" + std::to_string(f), th));
  }
  const auto summary = fleet::aggregate(ensemble);
  // z against the generator's standard error; the sample-SE figure is reported alongside
  double worst_z = 0.0;
  double worst_sample_z = 0.0;
  for (int i = 0; i < 6; ++i) {
    const auto& p = summary.types.at(0).params[static_cast<std::size_t>(i)];
    const double dev = std::abs(p.mean - truth()[i]);
    worst_z = std::max(worst_z, dev / (sd[static_cast<std::size_t>(i)] / std::sqrt(30.0)));
    worst_sample_z = std::max(worst_sample_z, dev / (p.std / std::sqrt(30.0)));
  }

  std::normal_distribution<double> cd0(0.0054, 0.0076), cdl(0.0019, 0.0011);
  std::vector<fleet::FlightResult> pairs;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd th = truth();
    th[3] = cd0(rng);
    th[4] = cdl(rng);
    pairs.push_back(synthetic_result("P" + std::to_string(i), th));
  }
  const double r = fleet::correlation_cd0_cdl(pairs);

  fleet::FleetSummary table;
  auto add = [&](const char* type, double c) {
    fleet::TypeSummary t;
    t.aircraft_type = type;
    t.count = 2;
    t.params.push_back({"C_D0", 2, c, 0.0, c, c});
    table.types.push_back(t);
  };
  add("A320", 0.0149);
  add("A321", 0.0054);
  add("B737", 0.0287);
  add("B777", 0.0361);
  add("B787", 0.0119);
  std::string order;
  for (const auto& row : fleet::cross_type_compare(table)) order += (order.empty() ? "" : ">") + row.aircraft_type;

  const bool ok = worst_z <= 2.0 && std::abs(r) < 0.2 && order == "B777>B737>A320>B787>A321";
  return {ok, "max |mean-truth|/SE " + fmt("%.3f", worst_z) + " (<=2; sample SE " +
                  fmt("%.3f", worst_sample_z) + "); |r| " + fmt("%.3f", std::abs(r)) +
                  " (<0.2, n=200); order " + order};
}

#ifdef CGEEM_BIN
int run_cli(const std::string& args) {
  const std::string cmd = std::string(CGEEM_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

void write_flight(const fs::path& p) {
  flight_data::ChannelTable table;
  for (const auto& spec : flight_data::builtin_schema()) {
    auto& s = table.channels[spec.qar_code];
    for (int i = 0; static_cast<double>(i) * spec.rate.period() < 900.0; ++i) {
      const double t = static_cast<double>(i) * spec.rate.period();
      const std::string& c = spec.qar_code;
      double v = 1.0;
      if (c == "TAS") v = 450.0 + std::sin(t / 40.0);
      else if (c == "GW") v = 150000.0 - 1.5 * t;
      else if (c == "PITCH" || c == "AOAL" || c == "AOAR") v = 2.5;
      else if (c == "FLT_PATH") v = (t >= 350 && t < 500) ? 3.0 : 0.0;
      else if (c == "PITCH_RATE" || c == "LONG") v = 0.0;
      else if (c == "TAT") v = -29.0;
      else if (c == "FF1" || c == "FF2") v = 2700.0;
      s.t.push_back(t);
      s.value.push_back(v);
    }
  }
  std::ofstream out(p);
  flight_data::write_channel_table(out, table, flight_data::builtin_schema());
}

// 10. every command twice, same inputs and seed, same bytes
Outcome cli_determinism() {
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const fs::path root = fs::current_path() / "acceptance_work";
  fs::remove_all(root);
  fs::create_directories(root / "in");
  const fs::path in = root / "in";
  io::write_json(in / "scenario.json", io::to_json(simgen::SimScenario{}));
  write_flight(in / "flight.csv");
  const auto seg = reference_segment();
  flight_data::write_segment_csv(in / "seg.csv", seg);
  const fs::path out = root / "out";

  const std::string s = in.string();
  const std::string o = out.string();
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "simulate --scenario " + s + "/scenario.json --seed 7 --out " + o},
      {"identify", "identify --segment " + s + "/seg.csv --segment " + s + "/seg2.csv --out " + o},
      {"compare", "compare --segment " + s + "/seg.csv --out " + o},
      {"extract", "extract --flight " + s + "/flight.csv --out " + o},
      {"fleet", "fleet --results " + s + " --out " + o},
      {"sweep", "sweep --scenario " + s + "/scenario.json --scales 0,1,2 --out " + o},
  };
  // fleet needs result files; produce them once, outside the compared tree
  {
    flight_data::FlightSegment other = seg;
    other.flight_id = "SIM-0002";
    flight_data::write_segment_csv(in / "seg2.csv", other);
    run_cli("identify --segment " + s + "/seg.csv --segment " + s + "/seg2.csv --out " + s + "/results");
  }

  bool ok = true;
  std::string detail;
  for (auto [name, args] : commands) {
    if (name == "fleet") args = "fleet --results " + s + "/results --out " + o;
    fs::remove_all(out);
    const int c1 = run_cli(args);
    const auto first = snapshot(out);
    fs::remove_all(out);
    const int c2 = run_cli(args);
    const auto second = snapshot(out);
    const bool same = c1 == c2 && !first.empty() && first == second && (c1 == 0 || c1 == 3);
    ok = ok && same;
    detail += name + (same ? " ok" : " DIFF") + "(" + std::to_string(first.size()) + " files, exit " +
              std::to_string(c1) + ") ";
  }
  return {ok, detail};
}
#endif

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zero-noise round trip", zero_noise_round_trip},
      {"noisy verification", noisy_verification},
      {"constant vs decaying gain", gain_behaviour},
      {"R robustness", r_robustness},
      {"drag-model ablation", drag_ablation},
      {"Jacobian correctness", jacobian_accuracy},
      {"passthrough-channel equivalence", channel_equivalence},
      {"convergence mechanics", convergence_mechanics},
      {"fleet statistics", fleet_statistics},
#ifdef CGEEM_BIN
      {"CLI determinism", cli_determinism},
#endif
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
  }
#ifndef CGEEM_BIN
  std::printf("FAIL 10 CLI determinism: cgeem tool not built\n");
  ++failures;
#endif
  std::printf("%d of %d criteria failed\n", failures, 10);
  return failures == 0 ? 0 : 1;
}
