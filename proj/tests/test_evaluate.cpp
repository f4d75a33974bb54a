#include "support.hpp"

#include "scusum/error.hpp"
#include "scusum/evaluate.hpp"

#include <doctest.h>

#include <cmath>

using namespace testing;

namespace {

DetectorConfig config(double rho, double m, ObservationMode mode) {
  DetectorConfig c;
  c.rho = rho;
  c.threshold = m;
  c.mode = mode;
  return c;
}

} // namespace

TEST_CASE("exceedance fraction counts v >= m") {
  const std::vector<double> v{0.0, 1.0, 2.0, 3.0};
  CHECK(exceedance_fraction(v, 2.0) == 0.5);
  CHECK(exceedance_fraction(v, 10.0) == 0.0);
  CHECK_THROWS_AS(exceedance_fraction(std::vector<double>{}, 1.0), Error);

  const std::vector<VPathRow> rows{{Timestamp{}, 5.0, 1.0, 0, false},
                                   {Timestamp{}, 5.0, 0.0, 0, false},
                                   {Timestamp{}, 0.0, 1.0, 0, false}};
  CHECK(exceedance_fraction(rows, 1.0) == 0.5);
}

TEST_CASE("every post-change event alarms when m is tiny") {
  const RateTable rates = constant_rates(4.0, d(2015, 6, 1), d(2015, 6, 2));
  const Timestamp theta = rates.cells()[10].start;
  const auto e = detection_delay(rates, ChangeSpec{theta, 1.5},
                                 config(1.5, 1e-9, ObservationMode::EventTimes), 400, 5);
  CHECK(e.detections == 400);
  CHECK(e.detect_probability == 1.0);
  CHECK(e.mean_delay_events == 1.0);
  CHECK(e.max_delay_events == 1.0);
  CHECK(e.standard_error == 0.0);
  // Each pre-change event is a false alarm: 10 slots at 4 expected calls.
  CHECK(static_cast<double>(e.false_alarms) / 400.0 == doctest::Approx(40.0).epsilon(0.03));
  CHECK(e.steps_before_change == 400 * 10);
  CHECK(e.exceedances_before_change == 0);
}

TEST_CASE("a large jump is detected quickly in both modes") {
  const IntensityModel model = seasonal_model(300.0);
  const DelayHorizon horizon{d(2015, 6, 1), d(2015, 6, 5)};
  const Timestamp theta = Timestamp::at(d(2015, 6, 2), 9 * 60.0);
  for (auto mode : {ObservationMode::AggregatedCounts, ObservationMode::EventTimes}) {
    const auto e =
        detection_delay(model, ChangeSpec{theta, 3.0}, config(3.0, 8.0, mode), horizon, 300, 2);
    CHECK(e.detect_probability > 0.99);
    CHECK(e.mean_delay_events > 0.0);
    // Aggregated counts are only seen at slot ends, so a whole busy slot can pass.
    CHECK(e.mean_delay_events < 150.0);
    CHECK(e.mean_delay_slots < 2.0);
    CHECK(e.max_delay_events >= e.mean_delay_events);
    CHECK(e.in_control_days == doctest::Approx(300 * (1.0 + 9.0 / 24.0)));
  }
}

TEST_CASE("no detection is flagged rather than averaged") {
  const RateTable rates = constant_rates(1.0, d(2015, 6, 1), d(2015, 6, 1));
  const Timestamp theta = rates.cells()[21].start;
  const auto e = detection_delay(rates, ChangeSpec{theta, 1.1},
                                 config(1.1, 1e6, ObservationMode::AggregatedCounts), 50, 1);
  CHECK(e.flagged);
  CHECK(e.detections == 0);
  CHECK(std::isnan(e.mean_delay_events));
  CHECK_THROWS_AS(detection_delay(rates, ChangeSpec{}, config(1.1, 1.0,
                                                              ObservationMode::AggregatedCounts),
                                  50, 1),
                  Error);
}

TEST_CASE("worst case over a theta grid") {
  const IntensityModel model = seasonal_model(300.0);
  const DelayHorizon horizon{d(2015, 6, 1), d(2015, 6, 12)};
  const std::vector<Timestamp> grid{Timestamp::at(d(2015, 6, 2), 7.5 * 60),
                                    Timestamp::at(d(2015, 6, 2), 12.5 * 60),
                                    Timestamp::at(d(2015, 6, 6), 7.5 * 60)};
  const auto r = worst_case_delay(model, 1.5, grid,
                                  config(1.5, 10.0, ObservationMode::AggregatedCounts), horizon,
                                  200, 9);
  REQUIRE(r.per_theta.size() == 3);
  double worst = 0.0;
  for (const auto& e : r.per_theta) {
    worst = std::max(worst, e.mean_delay_events);
  }
  CHECK(r.worst_case_delay_events == worst);
  CHECK(r.worst_case_max_delay_events >= r.worst_case_delay_events);
  CHECK(r.false_alarm_rate >= 0.0);
  CHECK(r.exceedance_fraction >= 0.0);
  CHECK(r.exceedance_fraction <= 1.0);
  CHECK_THROWS_AS(worst_case_delay(model, 1.5, {}, config(1.5, 10.0,
                                                          ObservationMode::AggregatedCounts),
                                   horizon, 10, 1),
                  Error);
}
