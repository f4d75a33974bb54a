#include "support.hpp"

#include "scusum/error.hpp"
#include "scusum/glm.hpp"
#include "scusum/profile.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace testing;

namespace {

std::vector<DayCount> simulated_days(const GlmModel& truth, Date first, Date last,
                                     std::uint64_t seed) {
  const Calendar cal = calendar();
  std::vector<DayCount> days;
  for (const auto& r : simulate_daily_counts(truth, cal, first, last, seed)) {
    days.push_back({cal.meta(r.date), r.count});
  }
  return days;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

} // namespace

TEST_CASE("factor spec columns and labels") {
  const auto c = default_candidates();
  REQUIRE(c.size() == 5);
  CHECK(c[0].columns() == 2);
  CHECK(c[4].columns() == 1 + 1 + 11 + 5 + 1);
  CHECK(c[4].label() == "trend+month+day_of_week+day_after_holiday");
  CHECK(FactorSpec{}.label() == "intercept");
  CHECK(c[4].column_names().size() == c[4].columns());
}

TEST_CASE("feature encoding") {
  const Calendar cal = calendar();
  const FactorSpec full{.weekday_flag = false, .trend = true, .month = true, .day_of_week = true,
                        .day_after_holiday = true};
  // 2015-04-07 is the Tuesday after Easter Monday.
  const auto x = encode_features(cal.meta(d(2015, 4, 7)), full);
  REQUIRE(x.size() == full.columns());
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 96.0);
  CHECK(x[2 + 2] == 1.0); // April
  CHECK(std::accumulate(x.begin() + 2, x.begin() + 13, 0.0) == 1.0);
  CHECK(x[13] == 1.0); // Tuesday
  CHECK(std::accumulate(x.begin() + 13, x.begin() + 18, 0.0) == 1.0);
  CHECK(x[18] == 1.0);
  const auto jan = encode_features(cal.meta(d(2015, 1, 5)), full);
  CHECK(std::accumulate(jan.begin() + 2, jan.begin() + 18, 0.0) == 0.0);
}

TEST_CASE("intercept-only fit is the log of the sample mean") {
  std::vector<DesignRow> rows;
  double sum = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::int64_t y = 100 + (i * 37) % 23;
    rows.push_back({{1.0}, y});
    sum += static_cast<double>(y);
  }
  const auto m = fit_poisson_glm(rows, FactorSpec{});
  CHECK(std::abs(m.coefficients[0] - std::log(sum / 50.0)) < 1e-10);
  CHECK(m.n_obs == 50);
}

TEST_CASE("two-group fit matches the group means") {
  const GlmModel truth = synthetic_glm(400.0);
  const auto days = simulated_days(truth, d(2015, 1, 1), d(2015, 12, 31), 17);
  double wk = 0.0, nwk = 0.0, sat = 0.0, nsat = 0.0;
  for (const auto& day : days) {
    if (day.meta.is_weekday) {
      wk += static_cast<double>(day.count);
      ++nwk;
    } else {
      sat += static_cast<double>(day.count);
      ++nsat;
    }
  }
  const auto m = fit_daily_glm(days, FactorSpec{.weekday_flag = true});
  CHECK(std::abs(m.coefficients[0] - std::log(sat / nsat)) < 1e-9);
  CHECK(std::abs(m.coefficients[1] - std::log((wk / nwk) / (sat / nsat))) < 1e-9);
  CHECK(m.bic == doctest::Approx(2.0 * std::log(static_cast<double>(days.size())) -
                                 2.0 * m.log_likelihood));
}

TEST_CASE("full model recovers the generating coefficients") {
  const GlmModel truth = synthetic_glm(500.0, 0.05);
  const auto days = simulated_days(truth, d(2015, 1, 1), d(2018, 12, 31), 5);
  const auto m = fit_daily_glm(days, truth.spec);
  REQUIRE(m.coefficients.size() == truth.coefficients.size());
  for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
    CHECK(std::abs(m.coefficients[j] - truth.coefficients[j]) < 0.05);
  }
  const auto rows = design_rows(days, truth.spec);
  const auto score = poisson_score(rows, m.coefficients);
  CHECK(max_abs(score) < 1e-8);
  CHECK(m.score_max_norm == doctest::Approx(max_abs(score)).epsilon(0.5).scale(1e-8));
  CHECK(m.deviance >= 0.0);
}

TEST_CASE("collinear designs are reported by column") {
  const auto days = simulated_days(synthetic_glm(300.0), d(2015, 1, 1), d(2015, 12, 31), 1);
  try {
    fit_daily_glm(days, FactorSpec{.weekday_flag = true, .day_of_week = true});
    FAIL("expected a singular design");
  } catch (const SingularDesignError& e) {
    CHECK(e.kind() == ErrorKind::SingularDesign);
    CHECK_FALSE(e.columns().empty());
  }
  std::vector<DayCount> january;
  for (const auto& day : days) {
    if (day.meta.month == 1) {
      january.push_back(day);
    }
  }
  CHECK_THROWS_AS(fit_daily_glm(january, FactorSpec{.month = true}), SingularDesignError);
}

TEST_CASE("non-convergence is a numeric failure") {
  std::vector<DesignRow> rows{{{1.0, 0.0}, 0}, {{1.0, 1.0}, 5}, {{1.0, 0.0}, 0}};
  IrlsOptions o;
  o.max_iterations = 3;
  o.deviance_tolerance = 0.0;
  o.score_tolerance = 0.0;
  CHECK_THROWS_AS(fit_poisson_glm(rows, FactorSpec{.weekday_flag = true}, o), ConvergenceError);
}

TEST_CASE("information criterion") {
  CHECK(information_criterion(3.0, 100.0, -50.0) == doctest::Approx(3.0 * std::log(100.0) + 100.0));
}

TEST_CASE("selection prefers the generating factors") {
  const auto days = simulated_days(synthetic_glm(500.0, 0.05), d(2015, 1, 1), d(2016, 12, 31), 2);
  const auto c = default_candidates();
  const auto s = select_model(c, days);
  CHECK(s.best.spec.month);
  CHECK(s.best.spec.day_of_week);
  CHECK(s.candidates.size() == c.size());
  for (const auto& o : s.candidates) {
    if (o.model) {
      CHECK(o.model->bic >= s.best.bic);
    }
  }
}

TEST_CASE("median fractions") {
  const std::vector<std::vector<double>> days{{1, 2, 7}, {2, 2, 6}, {0, 0, 0}, {3, 3, 4}};
  const auto f = median_fractions(days);
  // Medians 0.2, 0.2, 0.6 sum to one already.
  CHECK(f[0] == doctest::Approx(0.2));
  CHECK(f[1] == doctest::Approx(0.2));
  CHECK(f[2] == doctest::Approx(0.6));
  CHECK_THROWS_AS(median_fractions(std::vector<std::vector<double>>{{0, 0}}), Error);
}

TEST_CASE("slot profile is recovered from simulated counts") {
  const IntensityModel model = seasonal_model(800.0);
  const auto path =
      simulate_slot_counts(model, ChangeSpec{}, d(2015, 1, 1), d(2015, 12, 31), 3);
  const SlotProfile p = fit_slot_profile(path.slot_counts, model.calendar());
  const SlotProfile truth = synthetic_profile();
  CHECK(std::accumulate(p.weekday.begin(), p.weekday.end(), 0.0) == doctest::Approx(1.0));
  for (int s = 0; s < kWeekdaySlots; ++s) {
    CHECK(p.weekday[s] == doctest::Approx(truth.weekday[s]).epsilon(0.08));
  }
  for (int s = 0; s < kSaturdaySlots; ++s) {
    CHECK(p.saturday[s] == doctest::Approx(truth.saturday[s]).epsilon(0.15));
  }
  CHECK(p.fraction(Weekday::Sun, 0) == 0.0);
  CHECK(p.fraction(Weekday::Sat, 12) == 0.0);
}

TEST_CASE("busyness quartiles cover every open day") {
  const IntensityModel model = seasonal_model(500.0);
  const auto path = simulate_slot_counts(model, ChangeSpec{}, d(2015, 1, 1), d(2015, 6, 30), 6);
  const auto check = busyness_quartile_check(path.slot_counts, model.calendar());
  std::size_t weekdays = 0;
  for (const auto& g : check.weekday) {
    weekdays += g.days;
    CHECK(g.min_total <= g.max_total);
    if (g.days > 0) {
      CHECK(g.fractions.size() == kWeekdaySlots);
    }
  }
  for (std::size_t q = 1; q < 4; ++q) {
    CHECK(check.weekday[q - 1].max_total <= check.weekday[q].min_total);
  }
  std::set<Date> open_weekdays;
  for (const auto& r : path.slot_counts) {
    if (weekday_of(r.date) != Weekday::Sat) {
      open_weekdays.insert(r.date);
    }
  }
  CHECK(weekdays == open_weekdays.size());
}

TEST_CASE("small closed-form fits") {
  const std::vector<DesignRow> rows{{{1.0}, 2}, {{1.0}, 4}, {{1.0}, 6}};
  CHECK(std::abs(fit_poisson_glm(rows, FactorSpec{}).coefficients[0] - std::log(4.0)) < 1e-12);
  CHECK(information_criterion(1.0, std::exp(2.0), 0.0) == doctest::Approx(2.0));
}

TEST_CASE("refitting identical data gives a bit-identical BIC") {
  const auto days = simulated_days(synthetic_glm(300.0), d(2015, 1, 1), d(2016, 6, 30), 8);
  const auto spec = default_candidates()[3];
  const auto a = fit_daily_glm(days, spec);
  const auto b = fit_daily_glm(days, spec);
  CHECK(a.bic == b.bic);
  CHECK(a.coefficients == b.coefficients);
  CHECK(bic(a) == a.bic);
}

TEST_CASE("without a trend the trend-free candidate usually wins") {
  GlmModel truth;
  truth.spec = FactorSpec{.weekday_flag = true};
  truth.coefficients = {std::log(200.0), std::log(2.5)};
  const std::vector<FactorSpec> nested{FactorSpec{.weekday_flag = true},
                                       FactorSpec{.weekday_flag = true, .trend = true}};
  int wins = 0;
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto days = simulated_days(truth, d(2015, 1, 1), d(2016, 12, 31), derive_seed(31, r));
    wins += select_model(nested, days).best.spec.trend ? 0 : 1;
  }
  CHECK(wins >= 45);
}

TEST_CASE("single candidate and failing candidates") {
  const auto days = simulated_days(synthetic_glm(300.0), d(2015, 1, 1), d(2015, 3, 31), 2);
  const std::vector<FactorSpec> one{FactorSpec{.weekday_flag = true}};
  CHECK(select_model(one, days).best.spec == one[0]);
  // Only three months of data: month dummies for April..December are empty.
  const std::vector<FactorSpec> bad{FactorSpec{.month = true}};
  try {
    select_model(bad, days);
    FAIL("expected a selection failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ModelSelection);
  }
  const std::vector<FactorSpec> mixed{FactorSpec{.month = true}, FactorSpec{.weekday_flag = true}};
  const auto s = select_model(mixed, days);
  CHECK_FALSE(s.candidates[0].model.has_value());
  CHECK_FALSE(s.candidates[0].error.empty());
  CHECK(s.best.spec == mixed[1]);
}

TEST_CASE("toy profile examples") {
  const std::vector<std::vector<double>> one{{10, 30}};
  const auto f = median_fractions(one);
  CHECK(f[0] == doctest::Approx(0.25));
  CHECK(f[1] == doctest::Approx(0.75));

  std::vector<SlotRecord> uniform;
  for (Date day = d(2015, 6, 1); day <= d(2015, 6, 13); day += std::chrono::days{1}) {
    for (int s = 0; s < calendar().open_slots(day); ++s) {
      uniform.push_back({day, s, 5});
    }
  }
  const SlotProfile p = fit_slot_profile(uniform, calendar());
  for (double x : p.weekday) {
    CHECK(x == doctest::Approx(1.0 / kWeekdaySlots));
  }
  for (double x : p.saturday) {
    CHECK(x == doctest::Approx(1.0 / kSaturdaySlots));
  }
}

TEST_CASE("Saturday fractions scale the shared morning shape") {
  const IntensityModel model = seasonal_model(800.0);
  const auto path = simulate_slot_counts(model, ChangeSpec{}, d(2015, 1, 1), d(2016, 12, 31), 13);
  const SlotProfile p = fit_slot_profile(path.slot_counts, model.calendar());
  const double morning = std::accumulate(p.weekday.begin(), p.weekday.begin() + kSaturdaySlots, 0.0);
  for (int s = 0; s < kSaturdaySlots; ++s) {
    CHECK(p.saturday[s] / p.weekday[s] == doctest::Approx(1.0 / morning).epsilon(0.12));
  }
}

TEST_CASE("busyness quartiles on constructed data") {
  std::vector<SlotRecord> slots;
  Date day = d(2015, 6, 1);
  for (int k = 0; k < 8; ++k, day += std::chrono::days{1}) {
    if (weekday_of(day) == Weekday::Sat || weekday_of(day) == Weekday::Sun) {
      day += std::chrono::days{weekday_of(day) == Weekday::Sat ? 2 : 1};
    }
    const int base = 2 + k;
    for (int s = 0; s < kWeekdaySlots; ++s) {
      // Busier days get a heavier first slot.
      slots.push_back({day, s, s == 0 ? base * base : base});
    }
  }
  const auto check = busyness_quartile_check(slots, calendar());
  for (const auto& g : check.weekday) {
    CHECK(g.days == 2);
  }
  CHECK(check.weekday[3].fractions[0] > check.weekday[0].fractions[0]);

  std::vector<SlotRecord> same;
  day = d(2015, 6, 1);
  for (int k = 0; k < 8; ++k, day += std::chrono::days{1}) {
    if (weekday_of(day) == Weekday::Sat || weekday_of(day) == Weekday::Sun) {
      day += std::chrono::days{weekday_of(day) == Weekday::Sat ? 2 : 1};
    }
    for (int s = 0; s < kWeekdaySlots; ++s) {
      same.push_back({day, s, (k + 1) * (s + 1)});
    }
  }
  const auto flat = busyness_quartile_check(same, calendar());
  for (std::size_t q = 1; q < 4; ++q) {
    for (int s = 0; s < kWeekdaySlots; ++s) {
      CHECK(flat.weekday[q].fractions[s] == doctest::Approx(flat.weekday[0].fractions[s]));
    }
  }
}
