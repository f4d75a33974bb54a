#include "scusum/calibrate.hpp"

#include "scusum/error.hpp"
#include "scusum/parallel.hpp"
#include "scusum/simulate.hpp"

#include <cmath>
#include <sstream>

namespace scusum {

namespace {

constexpr double kThresholdFloor = 1e-9;
constexpr int kMaxExpansions = 60;
constexpr int kMaxBisections = 60;

} // namespace

void CalibrationTarget::validate() const {
  if (!(pi >= 1.0) || !std::isfinite(pi)) {
    throw Error(ErrorKind::Domain, "pi must be finite and at least 1");
  }
  if (replications < 100) {
    throw Error(ErrorKind::Domain, "calibration needs at least 100 replications");
  }
  if (horizon_days < 1) {
    throw Error(ErrorKind::Domain, "horizon must span at least one day");
  }
  if (!(tolerance_rel > 0.0 && tolerance_rel < 0.5)) {
    throw Error(ErrorKind::Domain, "tolerance_rel must lie in (0, 0.5)");
  }
}

Date CalibrationTarget::first_day(const IntensityModel& model) const {
  return start.value_or(model.calendar().origin());
}

Date CalibrationTarget::last_day(const IntensityModel& model) const {
  return first_day(model) + std::chrono::days{horizon_days - 1};
}

RunLength run_length(const RateTable& rates, const DetectorConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const ChangeSpec in_control;
  const auto cells = rates.cells();
  CusumDetector detector(config, cells.empty() ? Timestamp{} : cells.front().start);
  if (config.mode == ObservationMode::AggregatedCounts) {
    for (const auto& cell : cells) {
      const auto count = draw_poisson(cell.lambda, rng);
      if (auto alarm = detector.step(count, cell.lambda, cell.end())) {
        return {alarm->events_at_alarm, true};
      }
    }
    return {detector.state().events_seen, false};
  }
  std::vector<Timestamp> events;
  std::vector<AlarmEvent> alarms;
  for (const auto& cell : cells) {
    events.clear();
    draw_slot_events(cell, in_control, rng, events);
    detector.observe(events, cell.end(), rates, alarms);
    if (!alarms.empty()) {
      return {alarms.front().events_at_alarm, true};
    }
  }
  return {detector.state().events_seen, false};
}

namespace {

void throw_horizon(const ArlEstimate& e, int replications) {
  std::ostringstream msg;
  msg << "horizon too short: "
      << static_cast<long>(std::llround(e.censored_fraction * replications)) << " of "
      << replications << " paths raised no alarm at m = " << e.m;
  throw Error(ErrorKind::HorizonTooShort, msg.str());
}

ArlEstimate simulate_arl(double m, const RateTable& rates, const DetectorConfig& config,
                         const CalibrationTarget& target) {
  if (!(m > 0.0)) {
    throw Error(ErrorKind::Domain, "threshold m must be positive");
  }
  DetectorConfig c = config;
  c.threshold = m;
  c.validate();
  const auto n = static_cast<std::size_t>(target.replications);
  std::vector<RunLength> runs(n);
  parallel_for(n, [&](std::size_t i) { runs[i] = run_length(rates, c, derive_seed(target.seed, i)); });

  double sum = 0.0;
  std::size_t censored = 0;
  for (const auto& r : runs) {
    sum += static_cast<double>(r.events);
    censored += r.alarmed ? 0 : 1;
  }
  const double mean = sum / static_cast<double>(n);
  double squares = 0.0;
  for (const auto& r : runs) {
    const double d = static_cast<double>(r.events) - mean;
    squares += d * d;
  }
  ArlEstimate e;
  e.m = m;
  e.arl = mean;
  e.censored_fraction = static_cast<double>(censored) / static_cast<double>(n);
  e.standard_error = std::sqrt(squares / static_cast<double>(n - 1) / static_cast<double>(n));
  if (censored > 0) {
    e.standard_error /= 1.0 - e.censored_fraction;
  }
  return e;
}

} // namespace

ArlEstimate estimate_arl(double m, const RateTable& rates, const DetectorConfig& config,
                         const CalibrationTarget& target) {
  const ArlEstimate e = simulate_arl(m, rates, config, target);
  if (e.censored_fraction > 0.5) {
    throw_horizon(e, target.replications);
  }
  return e;
}

ArlEstimate estimate_arl(double m, const IntensityModel& model, const DetectorConfig& config,
                         const CalibrationTarget& target) {
  return estimate_arl(m, model.rate_table(target.first_day(model), target.last_day(model)),
                      config, target);
}

CalibrationResult calibrate_threshold(const IntensityModel& model, const DetectorConfig& config,
                                      const CalibrationTarget& target) {
  target.validate();
  const RateTable rates = model.rate_table(target.first_day(model), target.last_day(model));
  if (!(rates.total() > 0.0)) {
    throw Error(ErrorKind::Validation, "the calibration horizon has no expected arrivals");
  }
  const double pi = target.pi;
  CalibrationResult result;
  result.expected_days_to_alarm = pi / (rates.total() / target.horizon_days);

  // A mostly censored estimate is only a lower bound. It can still close the
  // bracket from above when that bound already exceeds pi.
  auto evaluate = [&](double m) {
    result.trace.push_back(simulate_arl(m, rates, config, target));
    const ArlEstimate& e = result.trace.back();
    if (e.censored_fraction > 0.5 && e.arl < pi) {
      throw_horizon(e, target.replications);
    }
    return e;
  };
  auto within = [&](const ArlEstimate& e) {
    return e.censored_fraction <= 0.5 && std::abs(e.arl - pi) <= target.tolerance_rel * pi;
  };
  auto finish = [&](const ArlEstimate& e) {
    result.threshold_m = e.m;
    result.arl_estimate = e.arl;
    result.arl_stderr = e.standard_error;
    result.censored_fraction = e.censored_fraction;
    return result;
  };
  auto expand = [&] {
    if (++result.expansions > kMaxExpansions) {
      throw Error(ErrorKind::Bracketing, "could not bracket pi within 60 expansions");
    }
  };

  ArlEstimate hi = evaluate(1.0);
  if (within(hi)) {
    return finish(hi);
  }
  ArlEstimate lo;
  if (hi.arl < pi) {
    while (hi.arl < pi) {
      expand();
      lo = hi;
      hi = evaluate(2.0 * hi.m);
      if (within(hi)) {
        return finish(hi);
      }
    }
  } else {
    while (true) {
      expand();
      const ArlEstimate e = evaluate(std::max(0.5 * hi.m, kThresholdFloor));
      if (within(e)) {
        return finish(e);
      }
      if (e.arl < pi) {
        lo = e;
        break;
      }
      if (e.m <= kThresholdFloor) {
        std::ostringstream msg;
        msg << "pi = " << pi << " is below the ARL " << e.arl
            << " reached at the smallest threshold; event-time mode reaches 1";
        throw Error(ErrorKind::Bracketing, msg.str());
      }
      hi = e;
    }
  }

  for (int i = 0; i < kMaxBisections && hi.m - lo.m > 1e-12 * hi.m; ++i) {
    const ArlEstimate mid = evaluate(0.5 * (lo.m + hi.m));
    if (within(mid)) {
      return finish(mid);
    }
    (mid.arl < pi ? lo : hi) = mid;
  }
  const ArlEstimate& best =
      hi.censored_fraction > 0.5 || std::abs(lo.arl - pi) <= std::abs(hi.arl - pi) ? lo : hi;
  if (best.censored_fraction <= 0.5 && std::abs(best.arl - pi) <= target.tolerance_rel * pi + 2.0 * best.standard_error) {
    return finish(best);
  }
  std::ostringstream msg;
  msg << "ARL jumps across pi = " << pi << " between m = " << lo.m << " (ARL " << lo.arl
      << ") and m = " << hi.m << " (ARL " << hi.arl << ")";
  throw Error(ErrorKind::Bracketing, msg.str());
}

} // namespace scusum
