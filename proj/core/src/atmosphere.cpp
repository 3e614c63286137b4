#include "cgeem/atmosphere.hpp"

#include <cmath>

#include "cgeem/errors.hpp"
#include "cgeem/units.hpp"

namespace cgeem::atmosphere {

namespace {

constexpr double kG = units::kStandardGravity;

void check_range(double h) {
  if (!(h >= -500.0 && h <= 20000.0)) {
    throw ConfigError("pressure altitude outside the modelled range [-500, 20000] m");
  }
}

}  // namespace

double isa_temperature(double h) {
  check_range(h);
  if (h <= kTropopause) return kSeaLevelTemperature - kLapseRate * h;
  return kSeaLevelTemperature - kLapseRate * kTropopause;
}

double isa_pressure(double h) {
  check_range(h);
  const double exponent = kG / (kLapseRate * kGasConstant);
  if (h <= kTropopause) {
    return kSeaLevelPressure * std::pow(isa_temperature(h) / kSeaLevelTemperature, exponent);
  }
  const double t11 = isa_temperature(kTropopause);
  const double p11 = kSeaLevelPressure * std::pow(t11 / kSeaLevelTemperature, exponent);
  return p11 * std::exp(-kG * (h - kTropopause) / (kGasConstant * t11));
}

double isa_density(double h) { return isa_pressure(h) / (kGasConstant * isa_temperature(h)); }

}  // namespace cgeem::atmosphere
