#pragma once

#include <numbers>

// Conversions between recorder source units and SI.

namespace cgeem::units {

inline constexpr double kKnotToMps = 0.514444;
inline constexpr double kLbToKg = 0.453592;
inline constexpr double kStandardGravity = 9.80665;
inline constexpr double kCelsiusOffset = 273.15;
inline constexpr double kSecondsPerHour = 3600.0;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

constexpr double knots_to_mps(double kn) { return kn * kKnotToMps; }
constexpr double mps_to_knots(double mps) { return mps / kKnotToMps; }

constexpr double lb_to_kg(double lb) { return lb * kLbToKg; }
constexpr double kg_to_lb(double kg) { return kg / kLbToKg; }

constexpr double g_to_mps2(double g) { return g * kStandardGravity; }
constexpr double mps2_to_g(double a) { return a / kStandardGravity; }

constexpr double celsius_to_kelvin(double c) { return c + kCelsiusOffset; }
constexpr double kelvin_to_celsius(double k) { return k - kCelsiusOffset; }

constexpr double lb_per_hour_to_kg_per_s(double lbh) { return lbh * kLbToKg / kSecondsPerHour; }
constexpr double kg_per_s_to_lb_per_hour(double kgs) { return kgs * kSecondsPerHour / kLbToKg; }

}  // namespace cgeem::units
