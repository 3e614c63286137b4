#include "cgeem/flight_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cgeem/csv.hpp"
#include "cgeem/errors.hpp"
#include "cgeem/units.hpp"

namespace cgeem::flight_data {

namespace {

constexpr double kGammaAir = 1.4;
constexpr double kRAir = 287.05;

constexpr std::string_view kSegmentColumns[] = {
    "t", "alpha", "q", "theta", "V", "gamma", "a_x", "a_z",
    "mass", "fuel_flow", "tat", "mach", "static_temp"};

double time_eps(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

bool getline_nonempty(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!csv::trim(line).empty()) return true;
  }
  return false;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return in;
}

// Source-unit value -> SI for the model-facing channels.
double to_si(SourceUnit unit, double v) {
  switch (unit) {
    case SourceUnit::kKnots: return units::knots_to_mps(v);
    case SourceUnit::kPounds: return units::lb_to_kg(v);
    case SourceUnit::kG: return units::g_to_mps2(v);
    case SourceUnit::kDegree: return units::deg_to_rad(v);
    case SourceUnit::kDegreePerSecond: return units::deg_to_rad(v);
    case SourceUnit::kCelsius: return units::celsius_to_kelvin(v);
    case SourceUnit::kPercent: return v;
    case SourceUnit::kPoundsPerHour: return units::lb_per_hour_to_kg_per_s(v);
  }
  return v;
}

double from_si(SourceUnit unit, double v) {
  switch (unit) {
    case SourceUnit::kKnots: return units::mps_to_knots(v);
    case SourceUnit::kPounds: return units::kg_to_lb(v);
    case SourceUnit::kG: return units::mps2_to_g(v);
    case SourceUnit::kDegree: return units::rad_to_deg(v);
    case SourceUnit::kDegreePerSecond: return units::rad_to_deg(v);
    case SourceUnit::kCelsius: return units::kelvin_to_celsius(v);
    case SourceUnit::kPercent: return v;
    case SourceUnit::kPoundsPerHour: return units::kg_per_s_to_lb_per_hour(v);
  }
  return v;
}

// Grid value of one channel at [t, t + dt).
double resample_at(const ChannelSeries& s, double native_hz, double grid_hz, double t,
                   double dt) {
  const double eps = time_eps(t);
  const auto first = std::lower_bound(s.t.begin(), s.t.end(), t - eps);
  if (native_hz > grid_hz) {
    const auto last = std::lower_bound(first, s.t.end(), t + dt - eps);
    if (last != first) {
      double sum = 0.0;
      for (auto it = first; it != last; ++it) {
        sum += s.value[static_cast<std::size_t>(it - s.t.begin())];
      }
      return sum / static_cast<double>(last - first);
    }
  }
  // Last observation at or before t.
  auto it = std::upper_bound(s.t.begin(), s.t.end(), t + eps);
  if (it == s.t.begin()) {
    throw FormatError("no sample at or before t=" + csv::format_double(t));
  }
  --it;
  return s.value[static_cast<std::size_t>(it - s.t.begin())];
}

void check_gaps(const std::string& code, const ChannelSeries& s, double period) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double gap = s.t[i] - s.t[i - 1];
    if (gap > 2.0 * period + time_eps(s.t[i])) {
      throw GapError(code, s.t[i - 1], s.t[i],
                     "gap in channel " + code + " between t=" + csv::format_double(s.t[i - 1]) +
                         " and t=" + csv::format_double(s.t[i]) + " exceeds twice its native period");
    }
  }
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::string_view to_string(SourceUnit unit) {
  switch (unit) {
    case SourceUnit::kKnots: return "knots";
    case SourceUnit::kPounds: return "lbs";
    case SourceUnit::kG: return "g";
    case SourceUnit::kDegree: return "degree";
    case SourceUnit::kDegreePerSecond: return "degree/s";
    case SourceUnit::kCelsius: return "celsius";
    case SourceUnit::kPercent: return "percent";
    case SourceUnit::kPoundsPerHour: return "lbs/h";
  }
  return "?";
}

const std::vector<ChannelSpec>& builtin_schema() {
  static const std::vector<ChannelSpec> schema = {
      {"TAS", "True Air Speed", SourceUnit::kKnots, 0.0001, {1, 1}, true},
      {"GW", "Gross Weight", SourceUnit::kPounds, 0.0001, {1, 64}, true},
      {"VRTG", "Vertical g-acceleration", SourceUnit::kG, 0.0039, {16, 1}, true},
      {"LONG", "Longitudinal g-acceleration", SourceUnit::kG, 0.0039, {16, 1}, true},
      {"PITCH", "Pitch Angle", SourceUnit::kDegree, 0.0001, {4, 1}, true},
      {"FLT_PATH", "Flight Path Angle", SourceUnit::kDegree, 0.0001, {1, 1}, false},
      {"PITCH_RATE", "Pitch Rate", SourceUnit::kDegreePerSecond, 0.0001, {8, 1}, true},
      {"TAT", "Total Air Temperature", SourceUnit::kCelsius, 0.25, {1, 1}, true},
      {"DRIFT", "Drift Angle", SourceUnit::kDegree, 0.0039, {4, 1}, false},
      {"WIN_SPD", "Wind Speed", SourceUnit::kKnots, 1.0, {2, 1}, false},
      {"WIN_DIR", "Wind Direction", SourceUnit::kDegree, 0.0039, {2, 1}, false},
      {"N11", "Low Spool Speed of the Engine#1", SourceUnit::kPercent, 0.125, {1, 4}, false},
      {"N12", "Low Spool Speed of the Engine#2", SourceUnit::kPercent, 0.125, {1, 4}, false},
      {"FF1", "Fuel Flow of the Engine#1", SourceUnit::kPoundsPerHour, 0.001, {1, 1}, true},
      {"FF2", "Fuel Flow of the Engine#2", SourceUnit::kPoundsPerHour, 0.001, {1, 1}, true},
      {"AOAL", "Angle of Attack Left", SourceUnit::kDegree, 0.3516, {4, 1}, true},
      {"AOAR", "Angle of Attack Right", SourceUnit::kDegree, 0.3516, {4, 1}, true},
  };
  return schema;
}

const ChannelSpec& find_channel(std::span<const ChannelSpec> schema, std::string_view code) {
  for (const auto& c : schema) {
    if (c.qar_code == code) return c;
  }
  throw SchemaError(std::string(code), "channel '" + std::string(code) + "' is not in the schema");
}

bool ChannelTable::has(std::string_view code) const {
  return channels.find(std::string(code)) != channels.end();
}

const ChannelSeries& ChannelTable::at(std::string_view code) const {
  const auto it = channels.find(std::string(code));
  if (it == channels.end()) {
    throw SchemaError(std::string(code), "channel '" + std::string(code) + "' not loaded");
  }
  return it->second;
}

double ChannelTable::begin_time() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& [_, s] : channels) {
    if (!s.empty()) t = std::min(t, s.t.front());
  }
  return t;
}

double ChannelTable::end_time() const {
  double t = -std::numeric_limits<double>::infinity();
  for (const auto& [_, s] : channels) {
    if (!s.empty()) t = std::max(t, s.t.back());
  }
  return t;
}

ChannelTable parse_channel_table(std::istream& in, std::span<const ChannelSpec> schema) {
  std::string line;
  do {
    if (!getline_nonempty(in, line)) throw FormatError("empty recorder file");
  } while (csv::trim(line).front() == '#');

  const auto header = csv::split(line);
  if (header.empty() || csv::trim(header[0]) != "t") {
    throw FormatError("first column must be 't'");
  }

  ChannelTable table;
  std::vector<ChannelSeries*> column(header.size(), nullptr);
  for (std::size_t i = 1; i < header.size(); ++i) {
    const auto code = csv::trim(header[i]);
    const auto spec = std::find_if(schema.begin(), schema.end(),
                                   [&](const ChannelSpec& c) { return c.qar_code == code; });
    if (spec == schema.end()) continue;
    if (table.has(code)) throw FormatError("duplicate column '" + std::string(code) + "'");
    column[i] = &table.channels[std::string(code)];
  }
  for (const auto& spec : schema) {
    if (table.has(spec.qar_code)) continue;
    if (spec.mandatory) {
      throw SchemaError(spec.qar_code, "missing mandatory channel " + spec.qar_code);
    }
    table.absent_optional.push_back(spec.qar_code);
  }

  double prev_t = -std::numeric_limits<double>::infinity();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = csv::split(line);
    if (cells.size() > header.size()) {
      throw FormatError("row " + std::to_string(row) + " has more cells than the header");
    }
    const auto t = csv::parse_double(cells[0]);
    if (!t) throw FormatError("row " + std::to_string(row) + " has no timestamp");
    if (*t < prev_t) {
      throw FormatError("non-monotone timestamp at row " + std::to_string(row));
    }
    prev_t = *t;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (!column[i]) continue;
      const auto v = csv::parse_double(cells[i]);
      if (!v) continue;
      auto& series = *column[i];
      if (!series.empty() && series.t.back() >= *t) {
        throw FormatError("non-monotone timestamp for " + std::string(csv::trim(header[i])) +
                          " at row " + std::to_string(row));
      }
      series.t.push_back(*t);
      series.value.push_back(*v);
    }
  }

  // A declared optional column with no samples counts as absent.
  for (auto it = table.channels.begin(); it != table.channels.end();) {
    if (it->second.empty()) {
      const auto& spec = find_channel(schema, it->first);
      if (spec.mandatory) {
        throw SchemaError(spec.qar_code, "mandatory channel " + spec.qar_code + " has no samples");
      }
      table.absent_optional.push_back(it->first);
      it = table.channels.erase(it);
    } else {
      ++it;
    }
  }
  return table;
}

ChannelTable load_channel_table(const std::filesystem::path& path,
                                std::span<const ChannelSpec> schema) {
  auto in = open_input(path);
  return parse_channel_table(in, schema);
}

void write_channel_table(std::ostream& out, const ChannelTable& table,
                         std::span<const ChannelSpec> schema) {
  std::vector<const ChannelSpec*> cols;
  for (const auto& spec : schema) {
    if (table.has(spec.qar_code)) cols.push_back(&spec);
  }
  out << "t";
  for (const auto* c : cols) out << ',' << c->qar_code;
  out << '\n';

  std::vector<std::size_t> cursor(cols.size(), 0);
  while (true) {
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& s = table.at(cols[c]->qar_code);
      if (cursor[c] < s.size()) t = std::min(t, s.t[cursor[c]]);
    }
    if (!std::isfinite(t)) break;
    out << csv::format_double(t);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out << ',';
      const auto& s = table.at(cols[c]->qar_code);
      if (cursor[c] < s.size() && s.t[cursor[c]] == t) {
        out << csv::format_double(s.value[cursor[c]]);
        ++cursor[c];
      }
    }
    out << '\n';
  }
}

double MeasuredSample::alpha_deg() const { return units::rad_to_deg(alpha); }

std::string check_sample(const MeasuredSample& s) {
  if (!(s.V > 0.0)) return "V must be positive";
  if (!(s.mass > 0.0)) return "mass must be positive";
  if (!(s.tat > 0.0)) return "tat must be positive";
  if (!(s.mach > 0.0 && s.mach < 1.0)) return "mach must lie in (0, 1)";
  if (!(std::abs(s.alpha) < 0.35)) return "|alpha| exceeds 0.35 rad";
  return {};
}

void validate_segment(const FlightSegment& segment) {
  if (segment.size() < kMinSegmentLength) {
    throw ConfigError("segment has " + std::to_string(segment.size()) + " samples; at least " +
                      std::to_string(kMinSegmentLength) + " required");
  }
  if (!(segment.grid_rate_hz > 0.0)) throw ConfigError("grid rate must be positive");
  const double dt = 1.0 / segment.grid_rate_hz;
  for (std::size_t i = 1; i < segment.size(); ++i) {
    const double step = segment[i].t - segment[i - 1].t;
    if (std::abs(step - dt) > 1e-6 * dt) {
      throw ConfigError("segment time grid is not uniform at sample " + std::to_string(i));
    }
  }
}

FlightSegment align_and_convert(const ChannelTable& raw, std::span<const ChannelSpec> schema,
                                double grid_rate_hz) {
  if (!(grid_rate_hz > 0.0)) throw ConfigError("grid rate must be positive");

  double max_rate = 0.0;
  for (const auto& spec : schema) {
    if (raw.has(spec.qar_code)) max_rate = std::max(max_rate, spec.rate.hz());
    if (spec.mandatory && !raw.has(spec.qar_code)) {
      throw SchemaError(spec.qar_code, "missing mandatory channel " + spec.qar_code);
    }
  }
  if (grid_rate_hz > max_rate) {
    throw ConfigError("grid rate exceeds the fastest channel rate");
  }

  // Channels that feed MeasuredSample.
  std::vector<const ChannelSpec*> used;
  for (const auto& spec : schema) {
    if (spec.mandatory || (spec.qar_code == "FLT_PATH" && raw.has("FLT_PATH"))) {
      used.push_back(&spec);
    }
  }

  double t_begin = -std::numeric_limits<double>::infinity();
  double t_end = std::numeric_limits<double>::infinity();
  for (const auto* spec : used) {
    const auto& s = raw.at(spec->qar_code);
    t_begin = std::max(t_begin, s.t.front());
    t_end = std::min(t_end, s.t.back() + spec->rate.period());
  }
  for (const auto& [code, s] : raw.channels) {
    check_gaps(code, s, find_channel(schema, code).rate.period());
  }

  const double dt = 1.0 / grid_rate_hz;
  std::size_t n = 0;
  while (t_begin + static_cast<double>(n) * dt + dt <= t_end + time_eps(t_end)) ++n;
  if (n < kMinSegmentLength) {
    throw ConfigError("record covers " + std::to_string(n) + " grid points; at least " +
                      std::to_string(kMinSegmentLength) + " required");
  }

  auto grid = [&](std::string_view code, double t) {
    const auto& spec = find_channel(schema, code);
    return resample_at(raw.at(code), spec.rate.hz(), grid_rate_hz, t, dt);
  };

  FlightSegment seg;
  seg.grid_rate_hz = grid_rate_hz;
  seg.samples.reserve(n);
  const bool has_path = raw.has("FLT_PATH");
  for (std::size_t i = 0; i < n; ++i) {
    const double rel = static_cast<double>(i) * dt;
    const double t = t_begin + rel;
    MeasuredSample s;
    s.t = rel;
    s.alpha = units::deg_to_rad(0.5 * (grid("AOAL", t) + grid("AOAR", t)));
    s.q = to_si(SourceUnit::kDegreePerSecond, grid("PITCH_RATE", t));
    s.theta = to_si(SourceUnit::kDegree, grid("PITCH", t));
    s.V = to_si(SourceUnit::kKnots, grid("TAS", t));
    s.gamma = has_path ? to_si(SourceUnit::kDegree, grid("FLT_PATH", t)) : s.theta - s.alpha;
    s.a_x = to_si(SourceUnit::kG, grid("LONG", t));
    s.a_z = to_si(SourceUnit::kG, grid("VRTG", t));
    s.mass = to_si(SourceUnit::kPounds, grid("GW", t));
    s.fuel_flow = to_si(SourceUnit::kPoundsPerHour, grid("FF1", t) + grid("FF2", t));
    s.tat = to_si(SourceUnit::kCelsius, grid("TAT", t));
    const auto m = derive_mach(s.V, s.tat);
    s.mach = m.mach;
    s.static_temp = m.static_temp;
    seg.samples.push_back(s);
  }
  return seg;
}

ChannelTable to_channel_table(const FlightSegment& segment, std::span<const ChannelSpec> schema) {
  ChannelTable table;
  const double grid = segment.grid_rate_hz;
  const double dt = 1.0 / grid;

  auto emit = [&](const std::string& code, auto&& source_value) {
    const auto& spec = find_channel(schema, code);
    const double rate = std::max(spec.rate.hz(), grid);
    const auto per_cell = static_cast<std::size_t>(std::llround(rate / grid));
    auto& s = table.channels[code];
    for (const auto& smp : segment.samples) {
      const double v = source_value(smp);
      for (std::size_t j = 0; j < per_cell; ++j) {
        s.t.push_back(smp.t + static_cast<double>(j) * dt / static_cast<double>(per_cell));
        s.value.push_back(v);
      }
    }
  };

  emit("TAS", [](const MeasuredSample& s) { return from_si(SourceUnit::kKnots, s.V); });
  emit("GW", [](const MeasuredSample& s) { return from_si(SourceUnit::kPounds, s.mass); });
  emit("VRTG", [](const MeasuredSample& s) { return from_si(SourceUnit::kG, s.a_z); });
  emit("LONG", [](const MeasuredSample& s) { return from_si(SourceUnit::kG, s.a_x); });
  emit("PITCH", [](const MeasuredSample& s) { return from_si(SourceUnit::kDegree, s.theta); });
  emit("FLT_PATH", [](const MeasuredSample& s) { return from_si(SourceUnit::kDegree, s.gamma); });
  emit("PITCH_RATE",
       [](const MeasuredSample& s) { return from_si(SourceUnit::kDegreePerSecond, s.q); });
  emit("TAT", [](const MeasuredSample& s) { return from_si(SourceUnit::kCelsius, s.tat); });
  emit("FF1", [](const MeasuredSample& s) {
    return from_si(SourceUnit::kPoundsPerHour, s.fuel_flow) / 2.0;
  });
  emit("FF2", [](const MeasuredSample& s) {
    return from_si(SourceUnit::kPoundsPerHour, s.fuel_flow) / 2.0;
  });
  emit("AOAL", [](const MeasuredSample& s) { return from_si(SourceUnit::kDegree, s.alpha); });
  emit("AOAR", [](const MeasuredSample& s) { return from_si(SourceUnit::kDegree, s.alpha); });

  for (const auto& spec : schema) {
    if (!table.has(spec.qar_code)) table.absent_optional.push_back(spec.qar_code);
  }
  return table;
}

MachResult derive_mach(double V, double tat) {
  if (!(tat > 0.0)) throw ConfigError("total air temperature must be positive");
  if (V < 0.0) throw ConfigError("airspeed must be non-negative");
  if (V == 0.0) return {0.0, tat};

  double mach = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double ts = tat / (1.0 + 0.2 * mach * mach);
    const double next = V / std::sqrt(kGammaAir * kRAir * ts);
    if (std::abs(next - mach) < 1e-9) {
      mach = next;
      return {mach, tat / (1.0 + 0.2 * mach * mach)};
    }
    mach = next;
  }
  throw NumericError("Mach fixed point did not converge in 100 iterations");
}

std::vector<FlightSegment> detect_cruise_segments(const FlightSegment& full_flight,
                                                  const CruiseCriteria& criteria) {
  const std::size_t n = full_flight.size();
  const double rate = full_flight.grid_rate_hz;
  const double gamma_max = units::deg_to_rad(criteria.gamma_max_deg);
  const double q_max = units::deg_to_rad(criteria.q_max_deg_s);
  const auto half = static_cast<std::size_t>(std::llround(0.5 * criteria.v_std_window_s * rate));

  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; ++i) speed[i] = full_flight[i].V;

  std::vector<bool> ok(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = full_flight[i];
    if (!(std::abs(s.gamma) < gamma_max && std::abs(s.q) < q_max)) continue;
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    ok[i] = sample_std(std::span<const double>(speed).subspan(lo, hi - lo)) < criteria.v_std_max_mps;
  }

  const auto min_len =
      static_cast<std::size_t>(std::ceil(criteria.min_duration_s * rate - 1e-9));
  std::vector<FlightSegment> out;
  std::size_t i = 0;
  while (i < n) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && ok[j]) ++j;
    if (j - i >= std::max(min_len, kMinSegmentLength)) {
      FlightSegment seg;
      seg.grid_rate_hz = rate;
      seg.aircraft_type = full_flight.aircraft_type;
      seg.tail_id = full_flight.tail_id;
      seg.flight_id = full_flight.flight_id.empty()
                          ? "seg" + std::to_string(out.size())
                          : full_flight.flight_id + "-seg" + std::to_string(out.size());
      const double t0 = full_flight[i].t;
      seg.samples.assign(full_flight.samples.begin() + static_cast<std::ptrdiff_t>(i),
                         full_flight.samples.begin() + static_cast<std::ptrdiff_t>(j));
      for (auto& s : seg.samples) s.t -= t0;
      out.push_back(std::move(seg));
    }
    i = j;
  }
  return out;
}

std::vector<FlightSegment> detect_cruise_segments(const ChannelTable& full_flight,
                                                  std::span<const ChannelSpec> schema,
                                                  const CruiseCriteria& criteria) {
  return detect_cruise_segments(align_and_convert(full_flight, schema, criteria.grid_rate_hz),
                                criteria);
}

void write_segment_csv(std::ostream& out, const FlightSegment& segment) {
  if (!segment.flight_id.empty()) out << "# flight_id: " << segment.flight_id << '\n';
  if (!segment.tail_id.empty()) out << "# tail_id: " << segment.tail_id << '\n';
  if (!segment.aircraft_type.empty()) out << "# aircraft_type: " << segment.aircraft_type << '\n';
  out << "# grid_rate_hz: " << csv::format_double(segment.grid_rate_hz) << '\n';
  for (std::size_t i = 0; i < std::size(kSegmentColumns); ++i) {
    out << (i ? "," : "") << kSegmentColumns[i];
  }
  out << '\n';
  for (const auto& s : segment.samples) {
    const double row[] = {s.t, s.alpha, s.q, s.theta, s.V, s.gamma, s.a_x,
                          s.a_z, s.mass, s.fuel_flow, s.tat, s.mach, s.static_temp};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      out << (i ? "," : "") << csv::format_double(row[i]);
    }
    out << '\n';
  }
}

void write_segment_csv(const std::filesystem::path& path, const FlightSegment& segment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_segment_csv(out, segment);
}

FlightSegment read_segment_csv(std::istream& in) {
  FlightSegment seg;
  std::optional<double> declared_rate;
  std::string line;
  while (true) {
    if (!getline_nonempty(in, line)) throw FormatError("segment file has no header");
    const auto trimmed = csv::trim(line);
    if (trimmed.front() != '#') break;
    const auto body = csv::trim(trimmed.substr(1));
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) continue;
    const auto key = csv::trim(body.substr(0, colon));
    const auto value = std::string(csv::trim(body.substr(colon + 1)));
    if (key == "flight_id") seg.flight_id = value;
    else if (key == "tail_id") seg.tail_id = value;
    else if (key == "aircraft_type") seg.aircraft_type = value;
    else if (key == "grid_rate_hz") declared_rate = csv::parse_double(value);
  }

  const auto header = csv::split(line);
  std::vector<int> index(std::size(kSegmentColumns), -1);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = csv::trim(header[i]);
    for (std::size_t c = 0; c < std::size(kSegmentColumns); ++c) {
      if (kSegmentColumns[c] == name) index[c] = static_cast<int>(i);
    }
  }
  for (std::size_t c = 0; c < std::size(kSegmentColumns); ++c) {
    if (index[c] < 0) {
      throw SchemaError(std::string(kSegmentColumns[c]),
                        "segment file lacks column '" + std::string(kSegmentColumns[c]) + "'");
    }
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = csv::split(trimmed);
    double v[std::size(kSegmentColumns)];
    for (std::size_t c = 0; c < std::size(kSegmentColumns); ++c) {
      const auto i = static_cast<std::size_t>(index[c]);
      const auto parsed = i < cells.size() ? csv::parse_double(cells[i]) : std::nullopt;
      if (!parsed) {
        throw FormatError("row " + std::to_string(row) + " is missing '" +
                          std::string(kSegmentColumns[c]) + "'");
      }
      v[c] = *parsed;
    }
    MeasuredSample s{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12]};
    if (!seg.samples.empty() && !(s.t > seg.samples.back().t)) {
      throw FormatError("non-monotone timestamp at row " + std::to_string(row));
    }
    seg.samples.push_back(s);
  }

  if (declared_rate) {
    seg.grid_rate_hz = *declared_rate;
  } else if (seg.size() >= 2) {
    seg.grid_rate_hz = 1.0 / (seg[1].t - seg[0].t);
  }
  return seg;
}

FlightSegment read_segment_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_segment_csv(in);
}

}  // namespace cgeem::flight_data
