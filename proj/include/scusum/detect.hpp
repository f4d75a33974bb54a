#pragma once

#include "scusum/calendar.hpp"
#include "scusum/ingest.hpp"
#include "scusum/intensity.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace scusum {

enum class Direction { Increase, Decrease };
enum class ObservationMode { EventTimes, AggregatedCounts };

const char* to_string(Direction direction);
const char* to_string(ObservationMode mode);

struct DetectorConfig {
  double rho = 1.2;
  double threshold = 1.0;
  Direction direction = Direction::Increase;
  ObservationMode mode = ObservationMode::AggregatedCounts;
  bool reset_on_alarm = true;

  // Increase needs rho > 1, Decrease 0 < rho < 1, and threshold > 0.
  void validate() const;
};

/// (rho - 1) / ln(rho): the drift normalizer of the log-likelihood-ratio
/// process once it is divided by |ln rho|.
double beta(double rho);

// beta * lambda_increment rounded to a multiple of 2^-30. With integer counts
// and dyadic drifts, U, its running minimum and V are exact in double
// precision, so V == U - min(U) holds bit for bit.
double drift_increment(double beta_value, double lambda_increment);

/// Running CUSUM statistic of one detector stream.
///
/// `u` is the normalized log-likelihood-ratio process (counts minus
/// beta-weighted cumulative intensity for Increase, the reverse for
/// Decrease) and `v = u - u_min`. U is re-based onto its running minimum
/// once that minimum leaves +/-2^22, which keeps the arithmetic exact and
/// leaves V untouched.
struct CusumState {
  double v = 0.0;
  double u = 0.0;
  double u_min = 0.0;
  std::int64_t events_seen = 0;
  Timestamp clock{};
  bool armed = true; // false while V stays above m after an alarm without reset

  bool operator==(const CusumState&) const = default;
};

struct AlarmEvent {
  Timestamp time{};
  double v_at_alarm = 0.0;
  std::int64_t events_at_alarm = 0;
  Direction direction = Direction::Increase;

  bool operator==(const AlarmEvent&) const = default;
};

struct StepOutcome {
  CusumState state;
  std::vector<AlarmEvent> alarms;
};

/// One observation interval seen only through its count.
///
/// v' = max(0, v + count - beta*dLambda) for Increase and
/// v' = max(0, v + beta*dLambda - count) for Decrease. An alarm is stamped
/// at `interval_end`, the earliest time the crossing is knowable.
StepOutcome step_aggregated(const CusumState& state, std::int64_t count,
                            double lambda_increment, const DetectorConfig& config,
                            Timestamp interval_end);

/// Exact event-time update over [state.clock, interval_end].
///
/// V jumps at each event and drifts by beta*lambda between events, clamped at
/// zero. The drift is accumulated from state.clock so that a step over a
/// whole slot removes exactly the same amount as step_aggregated does.
/// Increase alarms carry the event timestamp; Decrease alarms carry the
/// interpolated crossing instant and take effect at the next observation
/// point (event or interval end).
StepOutcome step_events(const CusumState& state, std::span<const Timestamp> events,
                        Timestamp interval_end, const RateTable& rates,
                        const DetectorConfig& config);

/// Stateful wrapper caching beta(rho); the unit of work in simulations.
class CusumDetector {
public:
  explicit CusumDetector(DetectorConfig config, Timestamp start = {});

  std::optional<AlarmEvent> step(std::int64_t count, double lambda_increment,
                                 Timestamp interval_end);
  // Appends any alarms raised in the interval to `alarms`.
  void observe(std::span<const Timestamp> events, Timestamp interval_end, const RateTable& rates,
               std::vector<AlarmEvent>& alarms);

  const CusumState& state() const { return state_; }
  const DetectorConfig& config() const { return config_; }
  double beta_value() const { return beta_; }

private:
  DetectorConfig config_;
  double beta_;
  CusumState state_;
};

struct VPathRow {
  Timestamp time{}; // end of the observation interval
  double v = 0.0;
  double lambda_increment = 0.0;
  std::int64_t count = 0;
  bool alarm = false;
};

struct DetectorRun {
  std::vector<VPathRow> path;
  std::vector<AlarmEvent> alarms;
  CusumState final_state;
};

// Aggregated-count run over a slot series. Missing slots and days leave the
// state untouched; a date without calendar metadata raises Coverage.
DetectorRun run_detector(std::span<const SlotRecord> series, const IntensityModel& model,
                         const DetectorConfig& config);

// Run over an event stream, reporting V at the end of every open slot of
// the rate table. Both observation modes are supported; in aggregated mode
// the events are first binned into their slots.
DetectorRun run_detector_events(std::span<const Timestamp> events, const RateTable& rates,
                                const DetectorConfig& config);

struct DoubleSidedRun {
  DetectorRun up;
  DetectorRun down;
  std::vector<AlarmEvent> alarms; // merged by time, tagged by direction
};

DoubleSidedRun double_sided_run(std::span<const SlotRecord> series, const IntensityModel& model,
                                const DetectorConfig& config_up, const DetectorConfig& config_down);

} // namespace scusum
