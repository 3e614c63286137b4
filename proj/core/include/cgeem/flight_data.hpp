#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cgeem::flight_data {

enum class SourceUnit {
  kKnots,
  kPounds,
  kG,
  kDegree,
  kDegreePerSecond,
  kCelsius,
  kPercent,
  kPoundsPerHour,
};

std::string_view to_string(SourceUnit unit);

/// Native recorder rate expressed as a ratio, e.g. 1/64 Hz for gross weight.
struct SampleRate {
  int num = 1;
  int den = 1;

  constexpr double hz() const { return static_cast<double>(num) / den; }
  constexpr double period() const { return static_cast<double>(den) / num; }
};

struct ChannelSpec {
  std::string qar_code;
  std::string physical_meaning;
  SourceUnit unit;
  double granularity;  // quantization step, source unit
  SampleRate rate;
  bool mandatory;
};

/// The 17 recorder channels the pipeline understands. Rates follow the
/// recorder frame layout; TAS is a computed parameter published at 1 Hz.
const std::vector<ChannelSpec>& builtin_schema();

const ChannelSpec& find_channel(std::span<const ChannelSpec> schema, std::string_view code);

/// One channel at its native rate, in source units.
struct ChannelSeries {
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
};

/// Raw multi-rate recorder data. Channels keep their original timestamps and
/// units; optional channels absent from the input are listed in
/// `absent_optional`.
struct ChannelTable {
  std::map<std::string, ChannelSeries> channels;
  std::vector<std::string> absent_optional;

  bool has(std::string_view code) const;
  const ChannelSeries& at(std::string_view code) const;
  double begin_time() const;
  double end_time() const;
};

/// Parses the neutral recorder CSV: a `t` column followed by QAR-code columns.
/// A row carries values only for the channels sampled at that instant; the
/// other cells are left empty. Columns not in the schema are ignored.
ChannelTable parse_channel_table(std::istream& in, std::span<const ChannelSpec> schema);
ChannelTable load_channel_table(const std::filesystem::path& path,
                                std::span<const ChannelSpec> schema);

/// Writes `table` in the layout read by parse_channel_table. Rows are merged
/// by timestamp; channel columns follow schema order.
void write_channel_table(std::ostream& out, const ChannelTable& table,
                         std::span<const ChannelSpec> schema);

/// A time-aligned sample in SI units.
struct MeasuredSample {
  double t = 0.0;          // s since segment start
  double alpha = 0.0;      // rad, mean of left/right vanes
  double q = 0.0;          // rad/s
  double theta = 0.0;      // rad
  double V = 0.0;          // m/s true airspeed
  double gamma = 0.0;      // rad
  double a_x = 0.0;        // m/s^2
  double a_z = 0.0;        // m/s^2, specific force (about +g in level flight)
  double mass = 0.0;       // kg
  double fuel_flow = 0.0;  // kg/s, sum of engines
  double tat = 0.0;        // K
  double mach = 0.0;
  double static_temp = 0.0;  // K

  double alpha_deg() const;
};

/// Returns an empty string when the sample satisfies the physical sanity
/// bounds, otherwise a description of the first violated bound.
std::string check_sample(const MeasuredSample& s);

inline constexpr std::size_t kMinSegmentLength = 50;

struct FlightSegment {
  std::vector<MeasuredSample> samples;
  double grid_rate_hz = 1.0;
  std::string flight_id;
  std::string aircraft_type;
  std::string tail_id;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  const MeasuredSample& operator[](std::size_t i) const { return samples[i]; }
};

/// Throws ConfigError when the segment is shorter than kMinSegmentLength or
/// the time grid is not uniform at grid_rate_hz.
void validate_segment(const FlightSegment& segment);

/// Resamples every channel onto a common grid and converts to SI.
/// Channels faster than the grid are block-averaged over [t_i, t_i + dt);
/// slower ones hold the last observed value.
FlightSegment align_and_convert(const ChannelTable& raw, std::span<const ChannelSpec> schema,
                                double grid_rate_hz);

/// Inverse of align_and_convert for an aligned segment: each channel is
/// emitted in source units at max(native rate, grid rate).
ChannelTable to_channel_table(const FlightSegment& segment, std::span<const ChannelSpec> schema);

struct MachResult {
  double mach;
  double static_temp;  // K
};

/// Solves M = V / sqrt(gamma R T_s), T_s = TAT / (1 + 0.2 M^2) by fixed point.
MachResult derive_mach(double V, double tat);

struct CruiseCriteria {
  double gamma_max_deg = 0.3;
  double q_max_deg_s = 0.2;
  double v_std_max_mps = 2.0;
  double v_std_window_s = 30.0;  // centered window for the airspeed std
  double min_duration_s = 200.0;
  double grid_rate_hz = 1.0;
};

/// Maximal quasi-steady level windows of an aligned full-flight record.
/// Output segments are re-based so each starts at t = 0.
std::vector<FlightSegment> detect_cruise_segments(const FlightSegment& full_flight,
                                                  const CruiseCriteria& criteria);

std::vector<FlightSegment> detect_cruise_segments(const ChannelTable& full_flight,
                                                  std::span<const ChannelSpec> schema,
                                                  const CruiseCriteria& criteria);

/// Segment CSV: optional `# key: value` metadata lines (flight_id, tail_id,
/// aircraft_type, grid_rate_hz), then the SI column header.
void write_segment_csv(std::ostream& out, const FlightSegment& segment);
void write_segment_csv(const std::filesystem::path& path, const FlightSegment& segment);
FlightSegment read_segment_csv(std::istream& in);
FlightSegment read_segment_csv(const std::filesystem::path& path);

}  // namespace cgeem::flight_data
