#include "support.hpp"

#include "scusum/calibrate.hpp"
#include "scusum/detect.hpp"
#include "scusum/error.hpp"
#include "scusum/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace testing;

namespace {

DetectorConfig up(double rho, ObservationMode mode = ObservationMode::AggregatedCounts) {
  DetectorConfig c;
  c.rho = rho;
  c.mode = mode;
  return c;
}

// Independent run-length simulator: its own generator, an inverse-transform
// Poisson sampler and a plain max(0, .) recursion in unquantized arithmetic.
struct BruteForce {
  double mean = 0.0;
  double se = 0.0;
};

BruteForce brute_force_arl(const RateTable& rates, double rho, double m, int reps,
                           unsigned seed) {
  std::minstd_rand gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto poisson = [&](double mean) {
    const double u = unit(gen);
    double p = std::exp(-mean);
    double cdf = p;
    long k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  };
  const double b = (rho - 1.0) / std::log(rho);
  double sum = 0.0;
  double squares = 0.0;
  for (int r = 0; r < reps; ++r) {
    double v = 0.0;
    long events = 0;
    for (const auto& cell : rates.cells()) {
      const long n = poisson(cell.lambda);
      events += n;
      v = std::max(0.0, v + static_cast<double>(n) - b * cell.lambda);
      if (v >= m) {
        break;
      }
    }
    sum += static_cast<double>(events);
    squares += static_cast<double>(events) * static_cast<double>(events);
  }
  const double mean = sum / reps;
  return {mean, std::sqrt((squares / reps - mean * mean) / (reps - 1))};
}

} // namespace

TEST_CASE("target validation") {
  CalibrationTarget t;
  CHECK_NOTHROW(t.validate());
  t.pi = 0.5;
  CHECK_THROWS_AS(t.validate(), Error);
  t = {};
  t.replications = 10;
  CHECK_THROWS_AS(t.validate(), Error);
  t = {};
  t.tolerance_rel = 0.0;
  CHECK_THROWS_AS(t.validate(), Error);
  t = {};
  t.horizon_days = 0;
  CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("ARL estimate agrees with an independent simulator") {
  const RateTable rates = constant_rates(6.0, d(2015, 6, 1), d(2015, 8, 31));
  CalibrationTarget t;
  t.replications = 4000;
  t.seed = 21;
  for (const double m : {3.0, 8.0}) {
    const auto e = estimate_arl(m, rates, up(1.5), t);
    const auto oracle = brute_force_arl(rates, 1.5, m, 4000, 1234);
    CHECK(e.censored_fraction == 0.0);
    const double se = std::sqrt(e.standard_error * e.standard_error + oracle.se * oracle.se);
    CHECK(std::abs(e.arl - oracle.mean) < 4.0 * se);
  }
}

TEST_CASE("ARL is non-decreasing in m under common random numbers") {
  const IntensityModel model = seasonal_model(300.0);
  CalibrationTarget t;
  t.replications = 400;
  t.horizon_days = 30;
  t.start = d(2015, 6, 1);
  double last = 0.0;
  for (const double m : {0.5, 1.0, 2.0, 4.0, 8.0, 12.0}) {
    const auto e = estimate_arl(m, model, up(1.2), t);
    CHECK(e.arl >= last);
    last = e.arl;
  }
}

TEST_CASE("ARL does not depend on the thread count") {
  const RateTable rates = constant_rates(5.0, d(2015, 6, 1), d(2015, 7, 31));
  CalibrationTarget t;
  t.replications = 300;
  set_max_threads(1);
  const auto a = estimate_arl(5.0, rates, up(1.3), t);
  set_max_threads(4);
  const auto b = estimate_arl(5.0, rates, up(1.3), t);
  set_max_threads(0);
  CHECK(a.arl == b.arl);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("tiny threshold gives ARL one in event mode only") {
  const RateTable rates = constant_rates(3.0, d(2015, 6, 1), d(2015, 6, 30));
  CalibrationTarget t;
  t.replications = 500;
  const auto events = estimate_arl(1e-9, rates, up(1.2, ObservationMode::EventTimes), t);
  CHECK(events.arl == 1.0);
  CHECK(events.standard_error == 0.0);
  const auto aggregated = estimate_arl(1e-9, rates, up(1.2), t);
  CHECK(aggregated.arl > 1.0);
}

TEST_CASE("calibration hits its target and reports the trace") {
  const IntensityModel model = seasonal_model(300.0);
  CalibrationTarget t;
  t.pi = 400.0;
  t.replications = 2000;
  t.horizon_days = 60;
  t.start = d(2015, 6, 1);
  t.tolerance_rel = 0.03;
  const auto r = calibrate_threshold(model, up(1.2), t);
  CHECK(std::abs(r.arl_estimate - t.pi) <= t.tolerance_rel * t.pi + 2.0 * r.arl_stderr);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.front().m == 1.0);
  CHECK(r.trace.back().m == r.threshold_m);
  CHECK(r.expected_days_to_alarm > 0.0);

  t.seed = 777;
  const auto check = estimate_arl(r.threshold_m, model, up(1.2), t);
  CHECK(std::abs(check.arl - t.pi) < 0.1 * t.pi);
}

TEST_CASE("calibration is reproducible") {
  const IntensityModel model = seasonal_model(300.0);
  CalibrationTarget t;
  t.pi = 150.0;
  t.replications = 300;
  t.horizon_days = 20;
  t.start = d(2015, 6, 1);
  const auto a = calibrate_threshold(model, up(1.3), t);
  const auto b = calibrate_threshold(model, up(1.3), t);
  CHECK(a.threshold_m == b.threshold_m);
  CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("unreachable targets fail with numeric errors") {
  const IntensityModel model = IntensityModel::constant(2.0, calendar());
  CalibrationTarget t;
  t.replications = 200;
  t.horizon_days = 5;
  t.start = d(2015, 6, 1);
  t.pi = 1.0;
  try {
    calibrate_threshold(model, up(1.2), t);
    FAIL("expected a bracketing failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Bracketing);
    CHECK(is_numeric_failure(e.kind()));
  }

  t.pi = 1e6;
  try {
    calibrate_threshold(model, up(1.2), t);
    FAIL("expected a horizon failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HorizonTooShort);
  }
}

TEST_CASE("a censored estimate above pi closes the bracket") {
  // 30 days at 40 calls a day; ARL 400 lies between m = 8 and m = 16, and at
  // m = 16 most paths outlive the horizon.
  const IntensityModel model = IntensityModel::constant(40.0 / 22.0, calendar());
  CalibrationTarget t;
  t.replications = 400;
  t.horizon_days = 30;
  t.start = d(2015, 6, 1);
  t.pi = 400.0;
  t.tolerance_rel = 0.05;
  t.seed = 17;
  const auto r = calibrate_threshold(model, up(1.3), t);
  CHECK(r.censored_fraction <= 0.5);
  CHECK(std::abs(r.arl_estimate - 400.0) <= 20.0);
  bool saw_censored = false;
  for (const auto& e : r.trace) {
    saw_censored = saw_censored || e.censored_fraction > 0.5;
  }
  CHECK(saw_censored);
  CHECK_THROWS_AS(estimate_arl(64.0, model, up(1.3), t), Error);
}

TEST_CASE("event-mode calibration reaches pi = 1") {
  const IntensityModel model = IntensityModel::constant(2.0, calendar());
  CalibrationTarget t;
  t.replications = 200;
  t.horizon_days = 5;
  t.start = d(2015, 6, 1);
  t.pi = 1.0;
  const auto r = calibrate_threshold(model, up(1.2, ObservationMode::EventTimes), t);
  CHECK(r.arl_estimate == 1.0);
}
