#pragma once

// International Standard Atmosphere, troposphere and lower stratosphere
// (valid to 20 km geopotential).

namespace cgeem::atmosphere {

inline constexpr double kSeaLevelPressure = 101325.0;  // Pa
inline constexpr double kSeaLevelTemperature = 288.15;  // K
inline constexpr double kLapseRate = 0.0065;            // K/m
inline constexpr double kTropopause = 11000.0;          // m
inline constexpr double kGasConstant = 287.05;          // J/(kg K)

double isa_temperature(double altitude_m);
double isa_pressure(double altitude_m);
double isa_density(double altitude_m);

}  // namespace cgeem::atmosphere
