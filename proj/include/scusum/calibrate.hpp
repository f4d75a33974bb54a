#pragma once

#include "scusum/calendar.hpp"
#include "scusum/detect.hpp"
#include "scusum/intensity.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace scusum {

/// False-alarm budget: the threshold is chosen so that the expected number
/// of in-control events until the first alarm equals `pi`.
struct CalibrationTarget {
  double pi = 1000.0;
  int replications = 1000;
  int horizon_days = 365; // calendar days simulated per replication
  double tolerance_rel = 0.02;
  std::uint64_t seed = 1;
  std::optional<Date> start; // defaults to the calendar origin

  // pi >= 1, replications >= 100, horizon_days >= 1, tolerance in (0, 0.5).
  void validate() const;
  Date first_day(const IntensityModel& model) const;
  Date last_day(const IntensityModel& model) const;
};

struct ArlEstimate {
  double m = 0.0;
  double arl = 0.0;
  double standard_error = 0.0;
  double censored_fraction = 0.0;
};

struct RunLength {
  std::int64_t events = 0;
  bool alarmed = false;
};

// One in-control replication, simulated slot by slot in the configured
// observation mode and stopped at the first alarm.
RunLength run_length(const RateTable& rates, const DetectorConfig& config, std::uint64_t seed);

/// Monte Carlo estimate of E[N_tau] under no change at threshold m.
///
/// Replication i uses stream derive_seed(target.seed, i), so estimates at
/// different m share their random numbers. Paths without an alarm in the
/// horizon contribute their event count as a lower bound and the standard
/// error is inflated by 1 / (1 - censored fraction). Throws HorizonTooShort
/// when more than half the paths are censored.
ArlEstimate estimate_arl(double m, const RateTable& rates, const DetectorConfig& config,
                         const CalibrationTarget& target);
ArlEstimate estimate_arl(double m, const IntensityModel& model, const DetectorConfig& config,
                         const CalibrationTarget& target);

struct CalibrationResult {
  double threshold_m = 0.0;
  double arl_estimate = 0.0;
  double arl_stderr = 0.0;
  double censored_fraction = 0.0;
  int expansions = 0;
  std::vector<ArlEstimate> trace; // every evaluation, in order
  // pi divided by the mean expected events per calendar day over the horizon.
  double expected_days_to_alarm = 0.0;
};

/// Threshold m with estimated ARL within tolerance_rel * pi of the target.
///
/// Starts at m = 1, doubles (or halves, down to 1e-9) until the target is
/// straddled, then bisects with common random numbers. If the bracket
/// collapses first, the closer endpoint is accepted when it lies within
/// tolerance_rel * pi + 2 standard errors. Throws Bracketing when no bracket
/// is found within 60 expansions or the collapsed bracket misses the target.
/// A mostly censored evaluation may serve as the upper bracket when its
/// lower-bound ARL already exceeds pi; otherwise it raises HorizonTooShort.
CalibrationResult calibrate_threshold(const IntensityModel& model, const DetectorConfig& config,
                                      const CalibrationTarget& target);

} // namespace scusum
