#include "cgeem/compare.hpp"

#include "cgeem/errors.hpp"

namespace cgeem::estimator {

ComparisonReport compare_estimators(const FlightSegment& segment, const AircraftConfig& cfg,
                                    const EstimatorConfig& base,
                                    const convergence::Thresholds& thresholds) {
  struct Variant {
    const char* label;
    EstimatorKind kind;
    double lambda;
  };
  static constexpr Variant kVariants[] = {
      {"cg", EstimatorKind::kConstantGain, 1.0},
      {"rls_1", EstimatorKind::kRls, 1.0},
      {"rls_0.95", EstimatorKind::kRls, 0.95},
  };

  ComparisonReport out;
  for (const auto& v : kVariants) {
    ComparisonEntry row;
    row.label = v.label;
    row.kind = v.kind;
    row.lambda = v.lambda;
    EstimatorConfig ecfg = base;
    ecfg.kind = v.kind;
    ecfg.lambda = v.lambda;
    try {
      row.trace = run(segment, cfg, ecfg);
      row.report = convergence::assess(*row.trace, thresholds);
      row.gain_ratio = gain_ratio(*row.trace);
    } catch (const StepError& e) {
      row.trace.reset();
      row.error = e.what();
      row.failed_step = e.step();
    } catch (const NumericError& e) {
      row.trace.reset();
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace cgeem::estimator
