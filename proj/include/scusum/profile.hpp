#pragma once

#include "scusum/calendar.hpp"
#include "scusum/ingest.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace scusum {

/// Fraction of a day's calls falling in each half-hour slot.
struct SlotProfile {
  std::array<double, kWeekdaySlots> weekday{};
  std::array<double, kSaturdaySlots> saturday{};

  static SlotProfile uniform();

  // Zero for slots outside the day's grid.
  double fraction(Weekday day, int slot) const;

  bool operator==(const SlotProfile&) const = default;
};

// Per-slot median of (slot count / day total) over the given days, then
// renormalized to sum to 1. Days whose total is zero are skipped; throws when
// no day has a positive total.
std::vector<double> median_fractions(std::span<const std::vector<double>> day_counts);

// Groups slot records into per-day count vectors on the day's grid. Only
// dates accepted by `keep` (and open in the calendar) are included.
std::vector<std::vector<double>> day_count_vectors(std::span<const SlotRecord> slots,
                                                   const Calendar& calendar,
                                                   const std::function<bool(const DayMeta&)>& keep);

SlotProfile fit_slot_profile(std::span<const SlotRecord> slots, const Calendar& calendar);

struct BusynessGroup {
  int quartile = 0; // 1..4, quietest first
  std::size_t days = 0;
  double min_total = 0.0;
  double max_total = 0.0;
  std::vector<double> fractions; // empty when the group has no days
};

/// Slot profiles per daily-total quartile, computed separately for weekdays
/// and Saturdays, for checking that intraday shape does not depend on
/// how busy the day is.
struct BusynessCheck {
  std::array<BusynessGroup, 4> weekday;
  std::array<BusynessGroup, 4> saturday;
};

BusynessCheck busyness_quartile_check(std::span<const SlotRecord> slots, const Calendar& calendar);

} // namespace scusum
