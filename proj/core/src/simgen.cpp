#include "cgeem/simgen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cgeem/convergence.hpp"
#include "cgeem/errors.hpp"
#include "cgeem/units.hpp"

namespace cgeem::simgen {

namespace {

double apply(double v, const ChannelNoise& c, double draw) {
  v += c.sigma * draw;
  if (c.step > 0.0) v = c.step * std::round(v / c.step);
  return v;
}

bool perturbs(const ChannelNoise& c) { return c.sigma != 0.0 || c.step != 0.0; }

ChannelNoise granularity_of(std::string_view code) {
  const auto& spec = flight_data::find_channel(flight_data::builtin_schema(), code);
  const double g = spec.granularity;
  double si = g;
  switch (spec.unit) {
    case flight_data::SourceUnit::kKnots: si = units::knots_to_mps(g); break;
    case flight_data::SourceUnit::kPounds: si = units::lb_to_kg(g); break;
    case flight_data::SourceUnit::kG: si = units::g_to_mps2(g); break;
    case flight_data::SourceUnit::kDegree:
    case flight_data::SourceUnit::kDegreePerSecond: si = units::deg_to_rad(g); break;
    case flight_data::SourceUnit::kCelsius: si = g; break;  // a step, not a temperature
    case flight_data::SourceUnit::kPercent: si = g; break;
    case flight_data::SourceUnit::kPoundsPerHour: si = units::lb_per_hour_to_kg_per_s(g); break;
  }
  return {si, si};
}

}  // namespace

MeasuredSample CruiseProfile::state_at(double t) const {
  using std::numbers::pi;
  MeasuredSample s;
  s.t = t;
  const double wa = 2.0 * pi / alpha_period_s;
  const double wv = 2.0 * pi / v_period_s;
  const double amp = units::deg_to_rad(alpha_amplitude_deg);
  s.alpha = units::deg_to_rad(alpha_mean_deg) + amp * std::sin(wa * t);
  s.gamma = units::deg_to_rad(gamma_deg);
  s.theta = s.alpha + s.gamma;
  s.q = amp * wa * std::cos(wa * t);
  s.V = v_mean + v_amplitude * std::sin(wv * t);
  s.mass = mass0 - fuel_flow * t;
  s.fuel_flow = fuel_flow;
  s.tat = tat;
  const auto m = flight_data::derive_mach(s.V, s.tat);
  s.mach = m.mach;
  s.static_temp = m.static_temp;
  return s;
}

FlightSegment synth_trajectory(double duration_s, double rate_hz, const CruiseProfile& profile) {
  if (!(rate_hz > 0.0)) throw ConfigError("rate must be positive");
  const auto intervals = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  if (!(duration_s > 0.0) || intervals + 1 < flight_data::kMinSegmentLength) {
    throw ConfigError("duration too short for a segment");
  }
  if (!(profile.mass0 - profile.fuel_flow * duration_s > 0.0)) {
    throw ConfigError("fuel burn exhausts the aircraft mass");
  }
  FlightSegment seg;
  seg.grid_rate_hz = rate_hz;
  seg.samples.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    seg.samples.push_back(profile.state_at(static_cast<double>(i) / rate_hz));
  }
  return seg;
}

FlightSegment synth_forces(const Eigen::VectorXd& truth, const FlightSegment& states,
                           const AircraftConfig& cfg, DragModel drag) {
  const auto model = estimator::make_model(states, cfg, drag);
  FlightSegment out = states;
  for (auto& s : out.samples) {
    const auto z = model.predict(truth, s);
    s.a_x = z[4];
    s.a_z = z[5];
  }
  return out;
}

FlightSegment synth_forces(const aero::AeroParameters& truth, const FlightSegment& states,
                           const AircraftConfig& cfg) {
  return synth_forces(truth.to_vector(), states, cfg, DragModel::kPolar);
}

NoiseSpec NoiseSpec::recorder_default() {
  NoiseSpec n;
  n.alpha = granularity_of("AOAL");
  n.q = granularity_of("PITCH_RATE");
  n.theta = granularity_of("PITCH");
  n.V = granularity_of("TAS");
  n.gamma = granularity_of("FLT_PATH");
  n.a_x = granularity_of("LONG");
  n.a_z = granularity_of("VRTG");
  n.mass = granularity_of("GW");
  n.fuel_flow = granularity_of("FF1");
  n.tat = granularity_of("TAT");
  return n;
}

NoiseSpec NoiseSpec::scaled(double s) const {
  if (!(s >= 0.0)) throw ConfigError("noise scale must be non-negative");
  NoiseSpec out = *this;
  for (ChannelNoise* c : {&out.alpha, &out.q, &out.theta, &out.V, &out.gamma, &out.a_x, &out.a_z,
                          &out.mass, &out.fuel_flow, &out.tat}) {
    c->sigma *= s;
    c->step *= s;
  }
  return out;
}

FlightSegment add_noise(const FlightSegment& clean, const NoiseSpec& noise, std::uint64_t seed) {
  for (const ChannelNoise* c : {&noise.alpha, &noise.q, &noise.theta, &noise.V, &noise.gamma,
                                &noise.a_x, &noise.a_z, &noise.mass, &noise.fuel_flow,
                                &noise.tat}) {
    if (!(c->sigma >= 0.0 && c->step >= 0.0)) {
      throw ConfigError("noise sigma and quantization step must be non-negative");
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool rederive = perturbs(noise.V) || perturbs(noise.tat);

  FlightSegment out = clean;
  for (auto& s : out.samples) {
    s.alpha = apply(s.alpha, noise.alpha, normal(rng));
    s.q = apply(s.q, noise.q, normal(rng));
    s.theta = apply(s.theta, noise.theta, normal(rng));
    s.V = apply(s.V, noise.V, normal(rng));
    s.gamma = apply(s.gamma, noise.gamma, normal(rng));
    s.a_x = apply(s.a_x, noise.a_x, normal(rng));
    s.a_z = apply(s.a_z, noise.a_z, normal(rng));
    s.mass = apply(s.mass, noise.mass, normal(rng));
    s.fuel_flow = apply(s.fuel_flow, noise.fuel_flow, normal(rng));
    s.tat = apply(s.tat, noise.tat, normal(rng));
    if (rederive) {
      const auto m = flight_data::derive_mach(s.V, s.tat);
      s.mach = m.mach;
      s.static_temp = m.static_temp;
    }
  }
  return out;
}

void SimScenario::validate() const {
  cfg.validate();
  const int n = drag_model == DragModel::kPolar ? 6 : 7;
  if (truth.size() != n) throw ConfigError("truth vector does not match the drag model");
  if (!(noise_scale >= 0.0)) throw ConfigError("noise_scale must be non-negative");
  if (!(rate_hz > 0.0) || !(duration_s > 0.0)) {
    throw ConfigError("duration and rate must be positive");
  }
  if (duration_s * rate_hz + 0.5 < static_cast<double>(flight_data::kMinSegmentLength)) {
    throw ConfigError("duration must cover at least 50 samples");
  }
  for (const ChannelNoise* c : {&noise.alpha, &noise.q, &noise.theta, &noise.V, &noise.gamma,
                                &noise.a_x, &noise.a_z, &noise.mass, &noise.fuel_flow, &noise.tat}) {
    if (!(c->sigma >= 0.0) || !(c->step >= 0.0)) {
      throw ConfigError("noise sigma and step must be non-negative");
    }
  }
}

FlightSegment simulate_clean(const SimScenario& sc) {
  sc.validate();
  auto seg = synth_forces(sc.truth, synth_trajectory(sc.duration_s, sc.rate_hz, sc.profile), sc.cfg,
                          sc.drag_model);
  seg.flight_id = sc.flight_id;
  seg.tail_id = sc.tail_id;
  seg.aircraft_type = sc.aircraft_type;
  return seg;
}

FlightSegment simulate(const SimScenario& sc) {
  return add_noise(simulate_clean(sc), sc.noise.scaled(sc.noise_scale), sc.seed);
}

std::uint64_t derive_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<SweepRecord> noise_sweep(const SimScenario& sc, std::span<const double> scales,
                                     const estimator::EstimatorConfig& ecfg) {
  if (scales.empty()) throw ConfigError("noise sweep needs at least one scale");
  const auto clean = simulate_clean(sc);
  auto run_cfg = ecfg;
  run_cfg.drag_model = sc.drag_model;

  std::vector<SweepRecord> out;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    SweepRecord rec;
    rec.scale = scales[i];
    rec.seed = derive_seed(sc.seed, i);
    try {
      const auto noisy = add_noise(clean, sc.noise.scaled(rec.scale), rec.seed);
      const auto trace = estimator::run(noisy, sc.cfg, run_cfg);
      const auto report = convergence::assess(trace);
      rec.estimate = trace.final_theta();
      rec.rel_error = ((rec.estimate - sc.truth).array().abs() / sc.truth.array().abs()).matrix();
      for (const auto& p : report.params) rec.cv.push_back(p.cv);
      rec.converged = report.converged;
      rec.ok = true;
    } catch (const Error& e) {
      rec.error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace cgeem::simgen
