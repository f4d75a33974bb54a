#include "scusum/profile.hpp"

#include "scusum/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace scusum {

namespace {

double median_of(std::vector<double> values) {
  const auto n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) {
    return *mid;
  }
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

BusynessGroup group_profile(int quartile, std::span<const std::vector<double>> days) {
  BusynessGroup g;
  g.quartile = quartile;
  g.days = days.size();
  if (days.empty()) {
    return g;
  }
  std::vector<double> totals;
  for (const auto& d : days) {
    totals.push_back(std::accumulate(d.begin(), d.end(), 0.0));
  }
  g.min_total = *std::min_element(totals.begin(), totals.end());
  g.max_total = *std::max_element(totals.begin(), totals.end());
  g.fractions = median_fractions(days);
  return g;
}

std::array<BusynessGroup, 4> quartile_groups(std::vector<std::vector<double>> days) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < days.size(); ++i) {
    const double total = std::accumulate(days[i].begin(), days[i].end(), 0.0);
    if (total > 0.0) {
      order.emplace_back(total, i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::array<std::vector<std::vector<double>>, 4> members;
  const std::size_t n = order.size();
  for (std::size_t rank = 0; rank < n; ++rank) {
    members[rank * 4 / n].push_back(std::move(days[order[rank].second]));
  }
  std::array<BusynessGroup, 4> out;
  for (int q = 0; q < 4; ++q) {
    out[static_cast<std::size_t>(q)] = group_profile(q + 1, members[static_cast<std::size_t>(q)]);
  }
  return out;
}

} // namespace

SlotProfile SlotProfile::uniform() {
  SlotProfile p;
  p.weekday.fill(1.0 / kWeekdaySlots);
  p.saturday.fill(1.0 / kSaturdaySlots);
  return p;
}

double SlotProfile::fraction(Weekday day, int slot) const {
  if (day == Weekday::Sun || slot < 0) {
    return 0.0;
  }
  if (day == Weekday::Sat) {
    return slot < kSaturdaySlots ? saturday[static_cast<std::size_t>(slot)] : 0.0;
  }
  return slot < kWeekdaySlots ? weekday[static_cast<std::size_t>(slot)] : 0.0;
}

std::vector<double> median_fractions(std::span<const std::vector<double>> day_counts) {
  if (day_counts.empty()) {
    throw Error(ErrorKind::Validation, "no days to build a slot profile from");
  }
  const std::size_t slots = day_counts.front().size();
  std::vector<std::vector<double>> ratios(slots);
  for (const auto& day : day_counts) {
    if (day.size() != slots) {
      throw Error(ErrorKind::Validation, "days with different slot grids in one profile");
    }
    const double total = std::accumulate(day.begin(), day.end(), 0.0);
    if (total <= 0.0) {
      continue;
    }
    for (std::size_t k = 0; k < slots; ++k) {
      ratios[k].push_back(day[k] / total);
    }
  }
  if (ratios.empty() || ratios.front().empty()) {
    throw Error(ErrorKind::Validation, "every day has a zero total; slot profile undefined");
  }
  std::vector<double> fractions(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    fractions[k] = median_of(std::move(ratios[k]));
  }
  const double sum = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  if (sum <= 0.0) {
    throw Error(ErrorKind::Validation, "median slot fractions are all zero");
  }
  for (auto& f : fractions) {
    f /= sum;
  }
  return fractions;
}

std::vector<std::vector<double>> day_count_vectors(std::span<const SlotRecord> slots,
                                                   const Calendar& calendar,
                                                   const std::function<bool(const DayMeta&)>& keep) {
  std::map<Date, std::vector<double>> days;
  for (const auto& r : slots) {
    const int open = calendar.open_slots(r.date);
    if (open == 0 || r.slot >= open) {
      continue;
    }
    auto it = days.find(r.date);
    if (it == days.end()) {
      if (!keep(calendar.meta(r.date))) {
        continue;
      }
      it = days.emplace(r.date, std::vector<double>(static_cast<std::size_t>(open), 0.0)).first;
    }
    it->second[static_cast<std::size_t>(r.slot)] += static_cast<double>(r.count);
  }
  std::vector<std::vector<double>> out;
  out.reserve(days.size());
  for (auto& [date, counts] : days) {
    out.push_back(std::move(counts));
  }
  return out;
}

SlotProfile fit_slot_profile(std::span<const SlotRecord> slots, const Calendar& calendar) {
  const auto weekdays =
      day_count_vectors(slots, calendar, [](const DayMeta& m) { return m.is_weekday; });
  const auto saturdays = day_count_vectors(
      slots, calendar, [](const DayMeta& m) { return m.day_of_week == Weekday::Sat; });
  if (weekdays.empty() || saturdays.empty()) {
    throw Error(ErrorKind::Validation,
                "slot profile needs at least one weekday and one Saturday of slot data");
  }
  const auto wk = median_fractions(weekdays);
  const auto sat = median_fractions(saturdays);
  SlotProfile p;
  std::copy(wk.begin(), wk.end(), p.weekday.begin());
  std::copy(sat.begin(), sat.end(), p.saturday.begin());
  return p;
}

BusynessCheck busyness_quartile_check(std::span<const SlotRecord> slots, const Calendar& calendar) {
  BusynessCheck check;
  check.weekday = quartile_groups(
      day_count_vectors(slots, calendar, [](const DayMeta& m) { return m.is_weekday; }));
  check.saturday = quartile_groups(day_count_vectors(
      slots, calendar, [](const DayMeta& m) { return m.day_of_week == Weekday::Sat; }));
  return check;
}

} // namespace scusum
