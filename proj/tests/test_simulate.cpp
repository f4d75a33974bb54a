#include "support.hpp"

#include "scusum/error.hpp"
#include "scusum/ingest.hpp"
#include "scusum/simulate.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

using namespace testing;

namespace {

RateTable three_slots() {
  const Date day = d(2015, 6, 1);
  std::vector<SlotCell> cells;
  const double lambdas[] = {4.0, 12.0, 1.5};
  for (int s = 0; s < 3; ++s) {
    cells.push_back({day, s, Timestamp::slot_start(day, s), lambdas[s]});
  }
  return RateTable(cells);
}

} // namespace

TEST_CASE("derive_seed separates streams and is stable") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    seen.insert(derive_seed(42, i));
  }
  CHECK(seen.size() == 10000);
}

TEST_CASE("slot means split proportionally at theta") {
  const RateTable rates = three_slots();
  const auto cell = rates.cells()[1];
  const ChangeSpec none;
  CHECK(slot_means(cell, none).before == 12.0);
  CHECK(slot_means(cell, none).after == 0.0);
  const ChangeSpec mid{Timestamp{cell.start.minutes + 10.0}, 1.5};
  const auto m = slot_means(cell, mid);
  CHECK(m.before == doctest::Approx(4.0));
  CHECK(m.after == doctest::Approx(1.5 * 8.0));
  const ChangeSpec early{cell.start, 2.0};
  CHECK(slot_means(cell, early).before == 0.0);
  CHECK(slot_means(cell, early).after == 24.0);
}

TEST_CASE("draw_poisson treats a zero mean as zero") {
  Rng rng(3);
  CHECK(draw_poisson(0.0, rng) == 0);
  CHECK(draw_poisson(-1.0, rng) == 0);
}

TEST_CASE("thinned event times fit the piecewise intensity") {
  const RateTable rates = three_slots();
  const ChangeSpec change{Timestamp{rates.cells()[1].start.minutes + 15.0}, 1.8};
  constexpr int kBinsPerSlot = 6;
  constexpr int kReps = 4000;
  std::vector<double> observed(3 * kBinsPerSlot, 0.0);
  for (int r = 0; r < kReps; ++r) {
    const auto path = simulate_events(rates, change, derive_seed(5, r));
    REQUIRE(std::is_sorted(path.event_times.begin(), path.event_times.end()));
    REQUIRE(std::adjacent_find(path.event_times.begin(), path.event_times.end()) ==
            path.event_times.end());
    for (const auto t : path.event_times) {
      const double offset = t.minutes - rates.cells()[0].start.minutes;
      REQUIRE(offset >= 0.0);
      REQUIRE(offset < 3 * kSlotMinutes);
      observed[static_cast<std::size_t>(offset / (kSlotMinutes / kBinsPerSlot))] += 1.0;
    }
  }
  double chi2 = 0.0;
  for (int b = 0; b < 3 * kBinsPerSlot; ++b) {
    const auto& cell = rates.cells()[b / kBinsPerSlot];
    const double mid = cell.start.minutes + (b % kBinsPerSlot + 0.5) * kSlotMinutes / kBinsPerSlot;
    const double rate = mid >= change.theta->minutes ? change.rho * cell.lambda : cell.lambda;
    const double expected = kReps * rate / kBinsPerSlot;
    chi2 += (observed[b] - expected) * (observed[b] - expected) / expected;
  }
  // 0.999 quantile of chi-squared with 18 degrees of freedom.
  CHECK(chi2 < 42.31);
}

TEST_CASE("slot counts have the right means") {
  const IntensityModel model = seasonal_model(400.0);
  const RateTable rates = model.rate_table(d(2015, 6, 1), d(2015, 6, 1));
  const ChangeSpec change{rates.cells()[11].start, 1.3};
  constexpr int kReps = 3000;
  std::vector<double> sums(rates.cells().size(), 0.0);
  for (int r = 0; r < kReps; ++r) {
    const auto path = simulate_slot_counts(rates, change, derive_seed(9, r));
    REQUIRE(path.slot_counts.size() == rates.cells().size());
    for (std::size_t i = 0; i < sums.size(); ++i) {
      sums[i] += static_cast<double>(path.slot_counts[i].count);
    }
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double lambda = rates.cells()[i].lambda * (i >= 11 ? 1.3 : 1.0);
    const double se = std::sqrt(lambda / kReps);
    CHECK(std::abs(sums[i] / kReps - lambda) < 4.5 * se);
  }
}

TEST_CASE("simulation is deterministic in its seed") {
  const IntensityModel model = seasonal_model();
  const ChangeSpec change{Timestamp::at(d(2015, 6, 2), 600.0), 1.2};
  const auto a = simulate_events(model, change, d(2015, 6, 1), d(2015, 6, 6), 77);
  const auto b = simulate_events(model, change, d(2015, 6, 1), d(2015, 6, 6), 77);
  const auto c = simulate_events(model, change, d(2015, 6, 1), d(2015, 6, 6), 78);
  CHECK(a.event_times == b.event_times);
  CHECK(a.slot_counts == b.slot_counts);
  CHECK(a.event_times != c.event_times);
  CHECK(a.has_events);

  const auto s1 = simulate_slot_counts(model, change, d(2015, 6, 1), d(2015, 6, 6), 77);
  const auto s2 = simulate_slot_counts(model, change, d(2015, 6, 1), d(2015, 6, 6), 77);
  CHECK(s1.slot_counts == s2.slot_counts);
  CHECK_FALSE(s1.has_events);
}

TEST_CASE("event paths histogram back to their slot counts") {
  const IntensityModel model = seasonal_model();
  const RateTable rates = model.rate_table(d(2015, 6, 1), d(2015, 6, 13));
  const auto path = simulate_events(rates, ChangeSpec{}, 4);
  CHECK(histogram(path.event_times, rates) == path.slot_counts);
  CHECK(path.events_before_change == static_cast<std::int64_t>(path.event_times.size()));

  const std::vector<Timestamp> closed{Timestamp::at(d(2015, 6, 7), 600.0)};
  CHECK_THROWS_AS(histogram(closed, rates), Error);
}

TEST_CASE("no events fall outside open slots or on holidays") {
  const IntensityModel model = seasonal_model();
  const auto path = simulate_events(model, ChangeSpec{}, d(2015, 5, 10), d(2015, 5, 17), 8);
  for (const auto t : path.event_times) {
    const Date day = t.date();
    REQUIRE(model.calendar().is_open(day));
    const double minute = t.minute_of_day();
    REQUIRE(minute >= kFirstSlotMinute);
    REQUIRE(minute < kFirstSlotMinute + model.calendar().open_slots(day) * kSlotMinutes);
  }
  CHECK(std::none_of(path.slot_counts.begin(), path.slot_counts.end(),
                     [](const SlotRecord& r) { return r.date == d(2015, 5, 14); }));
}

TEST_CASE("daily counts follow the regression") {
  const GlmModel glm = synthetic_glm(500.0);
  const Calendar cal = calendar();
  const auto rows = simulate_daily_counts(glm, cal, d(2015, 1, 1), d(2016, 12, 31), 3);
  double ratio = 0.0;
  for (const auto& r : rows) {
    REQUIRE(cal.is_open(r.date));
    ratio += static_cast<double>(r.count) / glm.predict(cal.meta(r.date));
  }
  CHECK(ratio / rows.size() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("scenario names round trip") {
  for (auto k : {ScenarioKind::Identity, ScenarioKind::PostponeThirdTuesdayMorning}) {
    CHECK(parse_scenario_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_scenario_kind("tuesday"), Error);
}

TEST_CASE("postponing third-Tuesday mornings conserves daily totals") {
  const IntensityModel model = seasonal_model();
  const auto path = simulate_slot_counts(model, ChangeSpec{}, d(2015, 6, 1), d(2015, 9, 30), 12);
  const ScenarioTransform t{ScenarioKind::PostponeThirdTuesdayMorning};
  const auto result = apply_scenario(path.slot_counts, t, model.profile());
  REQUIRE(result.anchor.has_value());
  CHECK(*result.anchor == d(2015, 6, 2));
  REQUIRE(result.affected.size() >= 5);
  for (std::size_t i = 0; i < result.affected.size(); ++i) {
    CHECK(weekday_of(result.affected[i]) == Weekday::Tue);
    CHECK((result.affected[i] - *result.anchor).count() % 21 == 0);
  }
  CHECK(slot_day_totals(result.slots) == slot_day_totals(path.slot_counts));
  REQUIRE(result.slots.size() == path.slot_counts.size());
  const std::set<Date> affected(result.affected.begin(), result.affected.end());
  for (std::size_t i = 0; i < result.slots.size(); ++i) {
    const auto& before = path.slot_counts[i];
    const auto& after = result.slots[i];
    REQUIRE(before.date == after.date);
    REQUIRE(before.slot == after.slot);
    if (!affected.count(after.date)) {
      CHECK(after.count == before.count);
    } else if (after.slot < t.boundary_slot) {
      CHECK(after.count == 0);
    } else {
      CHECK(after.count >= before.count);
    }
  }

  const auto same = apply_scenario(path.slot_counts, ScenarioTransform{}, model.profile());
  CHECK(same.slots == path.slot_counts);
  CHECK(same.affected.empty());
}

TEST_CASE("morning calls are apportioned by largest remainder") {
  SlotProfile p = SlotProfile::uniform();
  std::vector<SlotRecord> day;
  for (int s = 0; s < kWeekdaySlots; ++s) {
    day.push_back({d(2015, 6, 2), s, s < 10 ? 1 : 0});
  }
  const auto r = apply_scenario(day, {ScenarioKind::PostponeThirdTuesdayMorning}, p);
  // Ten calls over twelve equal afternoon slots: the first ten get one each.
  for (int s = 10; s < kWeekdaySlots; ++s) {
    CHECK(r.slots[s].count == (s < 20 ? 1 : 0));
  }
}

TEST_CASE("an incomplete affected Tuesday is rejected") {
  std::vector<SlotRecord> day;
  for (int s = 0; s < kWeekdaySlots - 1; ++s) {
    day.push_back({d(2015, 6, 2), s, 3});
  }
  CHECK_THROWS_AS(
      apply_scenario(day, {ScenarioKind::PostponeThirdTuesdayMorning}, synthetic_profile()),
      Error);
}

TEST_CASE("synthetic profile and illustrative setup are well formed") {
  const SlotProfile p = synthetic_profile();
  CHECK(std::accumulate(p.weekday.begin(), p.weekday.end(), 0.0) == doctest::Approx(1.0));
  CHECK(std::accumulate(p.saturday.begin(), p.saturday.end(), 0.0) == doctest::Approx(1.0));
  const auto peak = std::max_element(p.weekday.begin(), p.weekday.end()) - p.weekday.begin();
  CHECK(peak < 10);

  const auto setup = illustrative_setup();
  CHECK((setup.last - setup.first).count() == 2);
  REQUIRE(setup.change.theta.has_value());
  CHECK(*setup.change.theta == Timestamp::at(setup.first + std::chrono::days{1}, 13 * 60.0));
  CHECK(setup.change.rho == 1.3);
  const RateTable rates = setup.model.rate_table(setup.first, setup.last);
  CHECK(rates.cells().size() == 3 * kWeekdaySlots);
  CHECK(rates.total() == doctest::Approx(3 * 600.0));
}
