#pragma once

#include "scusum/calendar.hpp"
#include "scusum/detect.hpp"
#include "scusum/intensity.hpp"
#include "scusum/simulate.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace scusum {

struct DelayHorizon {
  Date first{};
  Date last{};
};

/// Monte Carlo detection delay for one change point.
///
/// The delay of a path is (N_tau - N_theta)+ for the first alarm at or
/// after theta; alarms before theta are false alarms and do not end the
/// path. The mean and its standard error are over detecting paths only and
/// are NaN when nothing was detected (`flagged`). `max_delay_events` is the
/// largest delay over the detecting paths, a pessimistic stand-in for the
/// worst pre-change history.
struct DelayEstimate {
  Timestamp theta{};
  int replications = 0;
  int detections = 0;
  double detect_probability = 0.0;
  double mean_delay_events = 0.0;
  double standard_error = 0.0;
  double max_delay_events = 0.0;
  double mean_delay_slots = 0.0; // open half-hours from theta to the alarm
  std::int64_t false_alarms = 0;
  double in_control_days = 0.0;  // calendar days before theta, summed over paths
  std::int64_t steps_before_change = 0;
  std::int64_t exceedances_before_change = 0; // open-slot steps with v >= m
  bool flagged = false;
};

DelayEstimate detection_delay(const IntensityModel& model, const ChangeSpec& change,
                              const DetectorConfig& config, const DelayHorizon& horizon,
                              int replications, std::uint64_t seed);
DelayEstimate detection_delay(const RateTable& rates, const ChangeSpec& change,
                              const DetectorConfig& config, int replications, std::uint64_t seed);

struct DelayReport {
  double rho = 1.0;
  std::vector<DelayEstimate> per_theta;
  double worst_case_delay_events = 0.0; // max of the per-theta means
  double worst_case_max_delay_events = 0.0;
  double false_alarm_rate = 0.0;      // false alarms per in-control year
  double exceedance_fraction = 0.0;   // pre-change steps with v >= m
};

// Every grid point shares the seed, so the per-theta rows are driven by the
// same random numbers.
DelayReport worst_case_delay(const IntensityModel& model, double rho,
                             std::span<const Timestamp> theta_grid, const DetectorConfig& config,
                             const DelayHorizon& horizon, int replications, std::uint64_t seed);

// Fraction of entries with v >= m; throws on an empty path.
double exceedance_fraction(std::span<const double> v_path, double m);
// Same over the open-time rows of a detector run (rows with positive intensity).
double exceedance_fraction(std::span<const VPathRow> path, double m);

} // namespace scusum
