#include "scusum/simulate.hpp"

#include "scusum/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <tuple>

namespace scusum {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class Draw>
SimPath simulate(const RateTable& rates, const ChangeSpec& change, std::uint64_t seed, Draw draw) {
  SimPath path;
  path.change = change;
  path.seed = seed;
  path.slot_counts.reserve(rates.cells().size());
  Rng rng(seed);
  for (const auto& cell : rates.cells()) {
    const auto [before, after] = draw(cell, rng);
    path.events_before_change += before;
    path.slot_counts.push_back({cell.date, cell.slot, before + after});
  }
  return path;
}

void allot_afternoon(std::vector<SlotRecord*>& day, std::int64_t moved, int boundary,
                     const SlotProfile& profile) {
  const auto n = day.size() - static_cast<std::size_t>(boundary);
  std::vector<long double> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    weights[k] = profile.weekday[static_cast<std::size_t>(boundary) + k];
  }
  long double total = std::accumulate(weights.begin(), weights.end(), 0.0L);
  if (!(total > 0.0L)) {
    std::fill(weights.begin(), weights.end(), 1.0L);
    total = static_cast<long double>(n);
  }
  std::vector<std::int64_t> share(n);
  std::vector<long double> remainder(n);
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const long double exact = static_cast<long double>(moved) * weights[k] / total;
    share[k] = static_cast<std::int64_t>(std::floor(exact));
    remainder[k] = exact - static_cast<long double>(share[k]);
    assigned += share[k];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < moved; i = (i + 1) % n) {
    ++share[order[i]];
    ++assigned;
  }
  for (std::size_t k = 0; k < n; ++k) {
    day[static_cast<std::size_t>(boundary) + k]->count += share[k];
  }
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  state = splitmix64(state) ^ index;
  return splitmix64(state);
}

SlotMeans slot_means(const SlotCell& cell, const ChangeSpec& change) {
  if (!change.theta || *change.theta >= cell.end()) {
    return {cell.lambda, 0.0};
  }
  if (*change.theta <= cell.start) {
    return {0.0, change.rho * cell.lambda};
  }
  const double before = (change.theta->minutes - cell.start.minutes) / kSlotMinutes;
  return {cell.lambda * before, change.rho * cell.lambda * (1.0 - before)};
}

std::int64_t draw_poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) {
    return 0;
  }
  std::poisson_distribution<std::int64_t> poisson(mean);
  return poisson(rng);
}

std::pair<std::int64_t, std::int64_t> draw_slot_count(const SlotCell& cell,
                                                      const ChangeSpec& change, Rng& rng) {
  const auto means = slot_means(cell, change);
  const auto before = draw_poisson(means.before, rng);
  const auto after = draw_poisson(means.after, rng);
  return {before, after};
}

void draw_slot_events(const SlotCell& cell, const ChangeSpec& change, Rng& rng,
                      std::vector<Timestamp>& out) {
  if (!(cell.lambda > 0.0)) {
    return;
  }
  const double majorant = cell.lambda * std::max(1.0, change.rho);
  std::exponential_distribution<double> gap(majorant);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double end = cell.end().minutes;
  double u = 0.0;
  while (true) {
    u += gap(rng);
    if (u >= 1.0) {
      break;
    }
    Timestamp t{cell.start.minutes + u * kSlotMinutes};
    const double rate = change.active_at(t) ? change.rho * cell.lambda : cell.lambda;
    if (rate < majorant && unit(rng) * majorant >= rate) {
      continue;
    }
    if (t.minutes >= end) {
      t.minutes = std::nextafter(end, 0.0);
    }
    if (!out.empty() && t <= out.back()) {
      t.minutes = std::nextafter(out.back().minutes, end);
    }
    out.push_back(t);
  }
}

SimPath simulate_events(const RateTable& rates, const ChangeSpec& change, std::uint64_t seed) {
  SimPath path;
  path.change = change;
  path.seed = seed;
  path.has_events = true;
  Rng rng(seed);
  for (const auto& cell : rates.cells()) {
    draw_slot_events(cell, change, rng, path.event_times);
  }
  for (const auto t : path.event_times) {
    if (!change.active_at(t)) {
      ++path.events_before_change;
    }
  }
  path.slot_counts = histogram(path.event_times, rates);
  return path;
}

SimPath simulate_events(const IntensityModel& model, const ChangeSpec& change, Date first,
                        Date last, std::uint64_t seed) {
  return simulate_events(model.rate_table(first, last), change, seed);
}

SimPath simulate_slot_counts(const RateTable& rates, const ChangeSpec& change,
                             std::uint64_t seed) {
  return simulate(rates, change, seed, [&](const SlotCell& cell, Rng& rng) {
    return draw_slot_count(cell, change, rng);
  });
}

SimPath simulate_slot_counts(const IntensityModel& model, const ChangeSpec& change, Date first,
                             Date last, std::uint64_t seed) {
  return simulate_slot_counts(model.rate_table(first, last), change, seed);
}

std::vector<DailyRecord> simulate_daily_counts(const GlmModel& glm, const Calendar& calendar,
                                               Date first, Date last, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DailyRecord> out;
  for (Date d = first; d <= last; d += std::chrono::days{1}) {
    const DayMeta meta = calendar.meta(d);
    if (meta.is_open) {
      out.push_back({d, draw_poisson(glm.predict(meta), rng)});
    }
  }
  return out;
}

std::vector<SlotRecord> histogram(std::span<const Timestamp> events, const RateTable& rates) {
  const auto cells = rates.cells();
  std::vector<SlotRecord> out;
  out.reserve(cells.size());
  for (const auto& c : cells) {
    out.push_back({c.date, c.slot, 0});
  }
  for (const auto t : events) {
    const auto i = rates.locate(t);
    if (i >= cells.size() || t < cells[i].start) {
      throw Error(ErrorKind::Validation,
                  "event at " + format_timestamp(t) + " falls outside the open slots");
    }
    ++out[i].count;
  }
  return out;
}

const char* to_string(ScenarioKind kind) {
  return kind == ScenarioKind::Identity ? "identity" : "postpone-third-tuesday";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "identity") {
    return ScenarioKind::Identity;
  }
  if (text == "postpone-third-tuesday") {
    return ScenarioKind::PostponeThirdTuesdayMorning;
  }
  throw Error(ErrorKind::Validation, "unknown scenario '" + std::string(text) +
                                         "' (expected identity or postpone-third-tuesday)");
}

ScenarioResult apply_scenario(std::span<const SlotRecord> slots, const ScenarioTransform& transform,
                              const SlotProfile& profile) {
  ScenarioResult result;
  result.slots.assign(slots.begin(), slots.end());
  if (transform.kind == ScenarioKind::Identity) {
    return result;
  }
  if (transform.period_weeks <= 0 || transform.boundary_slot <= 0 ||
      transform.boundary_slot >= kWeekdaySlots) {
    throw Error(ErrorKind::Validation, "invalid scenario period or morning boundary");
  }
  std::sort(result.slots.begin(), result.slots.end(), [](const SlotRecord& a, const SlotRecord& b) {
    return std::tie(a.date, a.slot) < std::tie(b.date, b.slot);
  });

  std::map<Date, std::vector<SlotRecord*>> tuesdays;
  for (auto& r : result.slots) {
    if (weekday_of(r.date) == Weekday::Tue) {
      tuesdays[r.date].push_back(&r);
    }
  }
  if (tuesdays.empty()) {
    return result;
  }
  result.anchor = tuesdays.begin()->first;
  const int period = 7 * transform.period_weeks;
  for (auto& [date, day] : tuesdays) {
    if ((date - *result.anchor).count() % period != 0) {
      continue;
    }
    if (day.size() != static_cast<std::size_t>(kWeekdaySlots)) {
      throw Error(ErrorKind::Validation, "scenario needs all " + std::to_string(kWeekdaySlots) +
                                             " slots on " + format_date(date));
    }
    std::int64_t moved = 0;
    for (int k = 0; k < transform.boundary_slot; ++k) {
      moved += day[static_cast<std::size_t>(k)]->count;
      day[static_cast<std::size_t>(k)]->count = 0;
    }
    allot_afternoon(day, moved, transform.boundary_slot, profile);
    result.affected.push_back(date);
  }
  return result;
}

SlotProfile synthetic_profile() {
  SlotProfile p;
  auto bump = [](double t, double centre, double width) {
    return std::exp(-(t - centre) * (t - centre) / (2.0 * width * width));
  };
  for (int k = 0; k < kWeekdaySlots; ++k) {
    const double t = k + 0.5;
    p.weekday[static_cast<std::size_t>(k)] = bump(t, 6.0, 3.0) + 0.7 * bump(t, 14.0, 3.0) + 0.15;
  }
  const double weekday_total = std::accumulate(p.weekday.begin(), p.weekday.end(), 0.0);
  for (auto& w : p.weekday) {
    w /= weekday_total;
  }
  const double saturday_total =
      std::accumulate(p.weekday.begin(), p.weekday.begin() + kSaturdaySlots, 0.0);
  for (int k = 0; k < kSaturdaySlots; ++k) {
    p.saturday[static_cast<std::size_t>(k)] = p.weekday[static_cast<std::size_t>(k)] / saturday_total;
  }
  return p;
}

GlmModel synthetic_glm(double monday_volume, double trend_per_year) {
  if (!(monday_volume > 0.0)) {
    throw Error(ErrorKind::Domain, "synthetic volume must be positive");
  }
  GlmModel m;
  m.spec = FactorSpec{false, true, true, true, true};
  m.coefficients.push_back(std::log(monday_volume));
  m.coefficients.push_back(trend_per_year / 365.25);
  for (int month = 2; month <= 12; ++month) {
    m.coefficients.push_back(0.08 * std::sin(2.0 * std::numbers::pi * (month - 1) / 12.0));
  }
  for (const double dow : {-0.03, -0.06, -0.08, -0.12, -1.0}) {
    m.coefficients.push_back(dow);
  }
  m.coefficients.push_back(0.25);
  return m;
}

IllustrativeSetup illustrative_setup(double daily_volume, double theta_days, double rho) {
  if (!(daily_volume > 0.0) || !(theta_days >= 0.0)) {
    throw Error(ErrorKind::Domain, "illustrative setup needs a positive volume and theta >= 0");
  }
  SlotProfile profile;
  for (int k = 0; k < kWeekdaySlots; ++k) {
    const double phase = 2.0 * std::numbers::pi * (k + 0.5) / kWeekdaySlots;
    profile.weekday[static_cast<std::size_t>(k)] = 1.0 - 0.6 * std::cos(phase);
  }
  const double total = std::accumulate(profile.weekday.begin(), profile.weekday.end(), 0.0);
  for (auto& w : profile.weekday) {
    w /= total;
  }
  profile.saturday = SlotProfile::uniform().saturday;

  GlmModel glm;
  glm.coefficients = {std::log(daily_volume)};

  const Date first = make_date(2015, 6, 1); // a Monday
  const Date last = first + std::chrono::days{2};
  const auto day = static_cast<int>(std::floor(theta_days));
  const double fraction = theta_days - day;
  Timestamp theta = Timestamp::at(first + std::chrono::days{day},
                                  kFirstSlotMinute + fraction * kWeekdaySlots * kSlotMinutes);
  return {IntensityModel::seasonal(glm, profile, Calendar(make_date(2015, 1, 1), {})), first, last,
          ChangeSpec{theta, rho}};
}

} // namespace scusum
