#include "scusum/detect.hpp"

#include "scusum/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace scusum {

namespace {

constexpr double kDriftScale = 0x1p30;
constexpr double kRebaseLimit = 0x1p22;

bool increasing(const DetectorConfig& c) { return c.direction == Direction::Increase; }

void accumulate(CusumState& s, double x) {
  s.u += x;
  if (s.u < s.u_min) {
    s.u_min = s.u;
  }
  s.v = s.u - s.u_min;
  if (s.u_min < -kRebaseLimit || s.u_min > kRebaseLimit) {
    s.u -= s.u_min;
    s.u_min = 0.0;
  }
}

// Re-arms below the threshold; raises (and resets or disarms) at or above it.
std::optional<AlarmEvent> settle(CusumState& s, const DetectorConfig& c, Timestamp at) {
  if (s.v < c.threshold) {
    s.armed = true;
    return std::nullopt;
  }
  if (!s.armed) {
    return std::nullopt;
  }
  AlarmEvent alarm{at, s.v, s.events_seen, c.direction};
  if (c.reset_on_alarm) {
    s.u_min = s.u;
    s.v = 0.0;
  } else {
    s.armed = false;
  }
  return alarm;
}

void check_increment(std::int64_t count, double lambda_increment) {
  if (count < 0) {
    throw Error(ErrorKind::Validation, "negative count " + std::to_string(count));
  }
  if (!(lambda_increment >= 0.0) || !std::isfinite(lambda_increment)) {
    throw Error(ErrorKind::Validation, "intensity increment must be finite and non-negative");
  }
}

std::optional<AlarmEvent> aggregated_update(CusumState& s, std::int64_t count,
                                            double lambda_increment, const DetectorConfig& c,
                                            double beta_value, Timestamp interval_end) {
  check_increment(count, lambda_increment);
  const double drift = drift_increment(beta_value, lambda_increment);
  const auto n = static_cast<double>(count);
  accumulate(s, increasing(c) ? n - drift : drift - n);
  s.events_seen += count;
  s.clock = interval_end;
  return settle(s, c, interval_end);
}

void event_update(CusumState& s, std::span<const Timestamp> events, Timestamp interval_end,
                  const RateTable& rates, const DetectorConfig& c, double beta_value,
                  std::vector<AlarmEvent>& alarms) {
  if (interval_end < s.clock) {
    throw Error(ErrorKind::Validation, "interval end precedes the detector clock");
  }
  const Timestamp base = s.clock;
  double drift_done = 0.0;
  Timestamp last = base;

  // Drift from `last` to `to`; Decrease alarms may fire here.
  auto drift_to = [&](Timestamp to) {
    const double total = drift_increment(beta_value, rates.cumulative(base, to));
    const double piece = total - drift_done;
    drift_done = total;
    if (increasing(c)) {
      accumulate(s, -piece);
      settle(s, c, to);
      return;
    }
    const double v_before = s.v;
    accumulate(s, piece);
    Timestamp crossing = to;
    if (s.armed && s.v >= c.threshold) {
      const auto t = rates.advance(last, (c.threshold - v_before) / beta_value);
      crossing = t ? std::clamp(*t, last, to) : to;
    }
    if (auto alarm = settle(s, c, crossing)) {
      alarms.push_back(*alarm);
    }
  };

  for (const Timestamp e : events) {
    if (e < last || e > interval_end) {
      throw Error(ErrorKind::Validation, "event times must be sorted and inside the interval");
    }
    drift_to(e);
    ++s.events_seen;
    accumulate(s, increasing(c) ? 1.0 : -1.0);
    if (auto alarm = settle(s, c, e)) {
      alarms.push_back(*alarm);
    }
    last = e;
  }
  drift_to(interval_end);
  s.clock = interval_end;
}

} // namespace

const char* to_string(Direction direction) {
  return direction == Direction::Increase ? "increase" : "decrease";
}

const char* to_string(ObservationMode mode) {
  return mode == ObservationMode::EventTimes ? "events" : "aggregated";
}

void DetectorConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho) || rho == 1.0) {
    throw Error(ErrorKind::Domain, "rho must be positive, finite and different from 1");
  }
  if (direction == Direction::Increase && rho <= 1.0) {
    throw Error(ErrorKind::Domain, "an increase detector needs rho > 1");
  }
  if (direction == Direction::Decrease && rho >= 1.0) {
    throw Error(ErrorKind::Domain, "a decrease detector needs 0 < rho < 1");
  }
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::Domain, "threshold m must be positive and finite");
  }
}

double beta(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho) || rho == 1.0) {
    std::ostringstream msg;
    msg << "beta(rho) needs rho > 0 and rho != 1, got " << rho;
    throw Error(ErrorKind::Domain, msg.str());
  }
  const double delta = rho - 1.0;
  return delta / std::log1p(delta);
}

double drift_increment(double beta_value, double lambda_increment) {
  return std::nearbyint(beta_value * lambda_increment * kDriftScale) / kDriftScale;
}

StepOutcome step_aggregated(const CusumState& state, std::int64_t count,
                            double lambda_increment, const DetectorConfig& config,
                            Timestamp interval_end) {
  config.validate();
  StepOutcome out{state, {}};
  if (auto alarm = aggregated_update(out.state, count, lambda_increment, config,
                                     beta(config.rho), interval_end)) {
    out.alarms.push_back(*alarm);
  }
  return out;
}

StepOutcome step_events(const CusumState& state, std::span<const Timestamp> events,
                        Timestamp interval_end, const RateTable& rates,
                        const DetectorConfig& config) {
  config.validate();
  StepOutcome out{state, {}};
  event_update(out.state, events, interval_end, rates, config, beta(config.rho), out.alarms);
  return out;
}

CusumDetector::CusumDetector(DetectorConfig config, Timestamp start)
    : config_(config), beta_(0.0) {
  config_.validate();
  beta_ = beta(config_.rho);
  state_.clock = start;
}

std::optional<AlarmEvent> CusumDetector::step(std::int64_t count, double lambda_increment,
                                              Timestamp interval_end) {
  return aggregated_update(state_, count, lambda_increment, config_, beta_, interval_end);
}

void CusumDetector::observe(std::span<const Timestamp> events, Timestamp interval_end,
                            const RateTable& rates, std::vector<AlarmEvent>& alarms) {
  event_update(state_, events, interval_end, rates, config_, beta_, alarms);
}

DetectorRun run_detector(std::span<const SlotRecord> series, const IntensityModel& model,
                         const DetectorConfig& config) {
  if (config.mode != ObservationMode::AggregatedCounts) {
    throw Error(ErrorKind::Validation, "a slot series can only be run in aggregated mode");
  }
  DetectorRun run;
  if (series.empty()) {
    return run;
  }
  CusumDetector detector(config, series.front().start());
  run.path.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& r = series[i];
    if (i > 0 && std::tie(r.date, r.slot) <= std::tie(series[i - 1].date, series[i - 1].slot)) {
      throw Error(ErrorKind::Validation, "slot series must be sorted with unique slots");
    }
    const double lambda = model.slot_intensity(r.date, r.slot);
    const auto alarm = detector.step(r.count, lambda, r.end());
    run.path.push_back({r.end(), detector.state().v, lambda, r.count, alarm.has_value()});
    if (alarm) {
      run.alarms.push_back(*alarm);
    }
  }
  run.final_state = detector.state();
  return run;
}

DetectorRun run_detector_events(std::span<const Timestamp> events, const RateTable& rates,
                                const DetectorConfig& config) {
  DetectorRun run;
  if (rates.empty()) {
    return run;
  }
  if (!std::is_sorted(events.begin(), events.end())) {
    throw Error(ErrorKind::Validation, "event times must be sorted");
  }
  Timestamp start = rates.cells().front().start;
  if (!events.empty()) {
    start = std::min(start, events.front());
  }
  CusumDetector detector(config, start);
  std::size_t next = 0;
  for (const auto& cell : rates.cells()) {
    const Timestamp end = cell.end();
    std::size_t stop = next;
    while (stop < events.size() && events[stop] < end) {
      ++stop;
    }
    const auto batch = events.subspan(next, stop - next);
    const auto before = run.alarms.size();
    if (config.mode == ObservationMode::EventTimes) {
      detector.observe(batch, end, rates, run.alarms);
    } else if (auto alarm = detector.step(static_cast<std::int64_t>(batch.size()), cell.lambda, end)) {
      run.alarms.push_back(*alarm);
    }
    run.path.push_back({end, detector.state().v, cell.lambda,
                        static_cast<std::int64_t>(batch.size()), run.alarms.size() > before});
    next = stop;
  }
  run.final_state = detector.state();
  return run;
}

DoubleSidedRun double_sided_run(std::span<const SlotRecord> series, const IntensityModel& model,
                                const DetectorConfig& config_up,
                                const DetectorConfig& config_down) {
  if (config_up.direction != Direction::Increase || config_down.direction != Direction::Decrease) {
    throw Error(ErrorKind::Validation,
                "double-sided run needs an increase and a decrease configuration");
  }
  DoubleSidedRun out{run_detector(series, model, config_up),
                     run_detector(series, model, config_down), {}};
  out.alarms = out.up.alarms;
  out.alarms.insert(out.alarms.end(), out.down.alarms.begin(), out.down.alarms.end());
  std::stable_sort(out.alarms.begin(), out.alarms.end(),
                   [](const AlarmEvent& a, const AlarmEvent& b) { return a.time < b.time; });
  return out;
}

} // namespace scusum
