#pragma once

#include "scusum/calendar.hpp"
#include "scusum/glm.hpp"
#include "scusum/profile.hpp"

#include <optional>
#include <span>
#include <vector>

namespace scusum {

/// Replaces the weekday slot profile on every `period_days`-th day counted
/// from `anchor` (inclusive). Used to encode a recurring intraday pattern
/// such as calls routinely pushed from a morning into the afternoon.
struct ProfileOverride {
  Date anchor{};
  int period_days = 21;
  std::array<double, kWeekdaySlots> weekday{};

  bool applies(Date date) const;

  bool operator==(const ProfileOverride&) const = default;
};

ProfileOverride fit_profile_override(std::span<const SlotRecord> slots, const Calendar& calendar,
                                     Date anchor, int period_days);

/// Expected number of arrivals in one open half-hour slot.
struct SlotCell {
  Date date{};
  int slot = 0;
  Timestamp start{};
  double lambda = 0.0;

  Timestamp end() const { return Timestamp{start.minutes + kSlotMinutes}; }
};

/// Piecewise-constant intensity over a horizon, materialized as the ordered
/// list of open slots. Closed time carries zero intensity.
class RateTable {
public:
  RateTable() = default;
  explicit RateTable(std::vector<SlotCell> cells);

  std::span<const SlotCell> cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  // Sum of slot rate x overlap fraction over [from, to]; a full slot
  // contributes exactly its rate.
  double cumulative(Timestamp from, Timestamp to) const;
  // Earliest t >= from with cumulative(from, t) >= amount, if the horizon
  // holds that much intensity.
  std::optional<Timestamp> advance(Timestamp from, double amount) const;
  // Open time in [from, to], in slot units.
  double open_slots_between(Timestamp from, Timestamp to) const;
  double total() const;

  // Index of the first cell whose end is after t.
  std::size_t locate(Timestamp t) const;

private:
  std::vector<SlotCell> cells_;
};

/// Seasonal arrival rate: a daily-count predictor spread over half-hours by a
/// slot profile, or a constant per-slot rate on every open slot.
class IntensityModel {
public:
  static IntensityModel seasonal(GlmModel glm, SlotProfile profile, Calendar calendar);
  static IntensityModel constant(double rate_per_slot, Calendar calendar);

  bool is_constant() const { return !glm_.has_value(); }
  const std::optional<GlmModel>& glm() const { return glm_; }
  double constant_rate() const { return constant_rate_; }
  const SlotProfile& profile() const { return profile_; }
  const Calendar& calendar() const { return calendar_; }
  const std::vector<ProfileOverride>& overrides() const { return overrides_; }

  void add_override(ProfileOverride o) { overrides_.push_back(o); }

  // The constant per-slot rate used by the naive baseline, recorded at fit time.
  const std::optional<double>& baseline_rate() const { return baseline_rate_; }
  void set_baseline_rate(double rate) { baseline_rate_ = rate; }
  IntensityModel naive_baseline() const;

  double daily_total(Date date) const;
  // Expected calls in the slot; zero on closed slots and days.
  double slot_intensity(Date date, int slot) const;
  double cumulative_intensity(Timestamp from, Timestamp to) const;
  RateTable rate_table(Date first, Date last) const;

  // Fraction of the day's volume in the slot, honoring overrides.
  double slot_fraction(const DayMeta& meta, int slot) const;

  bool operator==(const IntensityModel&) const = default;

private:
  std::optional<GlmModel> glm_;
  double constant_rate_ = 0.0;
  SlotProfile profile_ = SlotProfile::uniform();
  Calendar calendar_;
  std::vector<ProfileOverride> overrides_;
  std::optional<double> baseline_rate_;
};

} // namespace scusum
