#include "scusum/evaluate.hpp"

#include "scusum/error.hpp"
#include "scusum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scusum {

namespace {

struct PathOutcome {
  bool detected = false;
  double delay_events = 0.0;
  double delay_slots = 0.0;
  std::int64_t false_alarms = 0;
  std::int64_t steps_before = 0;
  std::int64_t exceedances_before = 0;
};

PathOutcome run_path(const RateTable& rates, const ChangeSpec& change,
                     const DetectorConfig& config, std::uint64_t seed) {
  PathOutcome out;
  const auto cells = rates.cells();
  if (cells.empty()) {
    return out;
  }
  Rng rng(seed);
  CusumDetector detector(config, cells.front().start);
  std::int64_t before_change = 0;
  std::vector<Timestamp> events;
  std::vector<AlarmEvent> alarms;
  for (const auto& cell : cells) {
    alarms.clear();
    if (config.mode == ObservationMode::AggregatedCounts) {
      const auto [before, after] = draw_slot_count(cell, change, rng);
      before_change += before;
      if (auto alarm = detector.step(before + after, cell.lambda, cell.end())) {
        alarms.push_back(*alarm);
      }
    } else {
      events.clear();
      draw_slot_events(cell, change, rng, events);
      before_change += std::count_if(events.begin(), events.end(),
                                     [&](Timestamp t) { return !change.active_at(t); });
      detector.observe(events, cell.end(), rates, alarms);
    }
    for (const auto& alarm : alarms) {
      if (!change.active_at(alarm.time)) {
        ++out.false_alarms;
        continue;
      }
      out.detected = true;
      out.delay_events =
          static_cast<double>(std::max<std::int64_t>(0, alarm.events_at_alarm - before_change));
      out.delay_slots = rates.open_slots_between(*change.theta, alarm.time);
      return out;
    }
    if (cell.end() <= *change.theta) {
      ++out.steps_before;
      if (detector.state().v >= config.threshold) {
        ++out.exceedances_before;
      }
    }
  }
  return out;
}

} // namespace

DelayEstimate detection_delay(const RateTable& rates, const ChangeSpec& change,
                              const DetectorConfig& config, int replications, std::uint64_t seed) {
  if (!change.theta) {
    throw Error(ErrorKind::Validation, "detection delay needs a finite change time");
  }
  if (replications < 1) {
    throw Error(ErrorKind::Domain, "replications must be positive");
  }
  config.validate();
  const auto n = static_cast<std::size_t>(replications);
  std::vector<PathOutcome> paths(n);
  parallel_for(n, [&](std::size_t i) {
    paths[i] = run_path(rates, change, config, derive_seed(seed, i));
  });

  DelayEstimate e;
  e.theta = *change.theta;
  e.replications = replications;
  double sum = 0.0;
  double slots = 0.0;
  for (const auto& p : paths) {
    e.false_alarms += p.false_alarms;
    e.steps_before_change += p.steps_before;
    e.exceedances_before_change += p.exceedances_before;
    if (p.detected) {
      ++e.detections;
      sum += p.delay_events;
      slots += p.delay_slots;
      e.max_delay_events = std::max(e.max_delay_events, p.delay_events);
    }
  }
  if (!rates.empty()) {
    const double start = Timestamp::at(rates.cells().front().date, 0.0).minutes;
    const double end = Timestamp::at(rates.cells().back().date + std::chrono::days{1}, 0.0).minutes;
    const double cut = std::clamp(change.theta->minutes, start, end);
    e.in_control_days = (cut - start) / kMinutesPerDay * replications;
  }
  e.detect_probability = static_cast<double>(e.detections) / replications;
  if (e.detections == 0) {
    e.flagged = true;
    e.mean_delay_events = std::numeric_limits<double>::quiet_NaN();
    e.standard_error = std::numeric_limits<double>::quiet_NaN();
    e.mean_delay_slots = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.mean_delay_events = sum / e.detections;
  e.mean_delay_slots = slots / e.detections;
  double squares = 0.0;
  for (const auto& p : paths) {
    if (p.detected) {
      squares += (p.delay_events - e.mean_delay_events) * (p.delay_events - e.mean_delay_events);
    }
  }
  e.standard_error =
      e.detections > 1 ? std::sqrt(squares / (e.detections - 1) / e.detections) : 0.0;
  return e;
}

DelayEstimate detection_delay(const IntensityModel& model, const ChangeSpec& change,
                              const DetectorConfig& config, const DelayHorizon& horizon,
                              int replications, std::uint64_t seed) {
  return detection_delay(model.rate_table(horizon.first, horizon.last), change, config,
                         replications, seed);
}

DelayReport worst_case_delay(const IntensityModel& model, double rho,
                             std::span<const Timestamp> theta_grid, const DetectorConfig& config,
                             const DelayHorizon& horizon, int replications, std::uint64_t seed) {
  if (theta_grid.empty()) {
    throw Error(ErrorKind::Validation, "theta grid is empty");
  }
  const RateTable rates = model.rate_table(horizon.first, horizon.last);
  DelayReport report;
  report.rho = rho;
  report.worst_case_delay_events = std::numeric_limits<double>::quiet_NaN();
  std::int64_t false_alarms = 0;
  std::int64_t steps = 0;
  std::int64_t exceedances = 0;
  double days = 0.0;
  for (const auto theta : theta_grid) {
    auto e = detection_delay(rates, ChangeSpec{theta, rho}, config, replications, seed);
    false_alarms += e.false_alarms;
    steps += e.steps_before_change;
    exceedances += e.exceedances_before_change;
    days += e.in_control_days;
    if (!e.flagged) {
      report.worst_case_delay_events = std::isnan(report.worst_case_delay_events)
                                           ? e.mean_delay_events
                                           : std::max(report.worst_case_delay_events,
                                                      e.mean_delay_events);
      report.worst_case_max_delay_events =
          std::max(report.worst_case_max_delay_events, e.max_delay_events);
    }
    report.per_theta.push_back(e);
  }
  report.false_alarm_rate = days > 0.0 ? false_alarms / (days / 365.25) : 0.0;
  report.exceedance_fraction = steps > 0 ? static_cast<double>(exceedances) / steps : 0.0;
  return report;
}

double exceedance_fraction(std::span<const double> v_path, double m) {
  if (v_path.empty()) {
    throw Error(ErrorKind::Validation, "exceedance fraction of an empty path");
  }
  const auto hits = std::count_if(v_path.begin(), v_path.end(), [&](double v) { return v >= m; });
  return static_cast<double>(hits) / static_cast<double>(v_path.size());
}

double exceedance_fraction(std::span<const VPathRow> path, double m) {
  std::vector<double> open;
  for (const auto& row : path) {
    if (row.lambda_increment > 0.0) {
      open.push_back(row.v);
    }
  }
  return exceedance_fraction(open, m);
}

} // namespace scusum
