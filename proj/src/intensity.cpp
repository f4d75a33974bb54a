#include "scusum/intensity.hpp"

#include "scusum/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scusum {

bool ProfileOverride::applies(Date date) const {
  const auto diff = (date - anchor).count();
  return diff >= 0 && period_days > 0 && diff % period_days == 0;
}

ProfileOverride fit_profile_override(std::span<const SlotRecord> slots, const Calendar& calendar,
                                     Date anchor, int period_days) {
  if (period_days <= 0) {
    throw Error(ErrorKind::Validation, "override period must be positive");
  }
  ProfileOverride o{anchor, period_days, {}};
  const auto days = day_count_vectors(slots, calendar, [&](const DayMeta& m) {
    return m.is_weekday && o.applies(m.date);
  });
  if (days.empty()) {
    throw Error(ErrorKind::Validation, "no slot data on the days the override applies to");
  }
  const auto fractions = median_fractions(days);
  std::copy(fractions.begin(), fractions.end(), o.weekday.begin());
  return o;
}

RateTable::RateTable(std::vector<SlotCell> cells) : cells_(std::move(cells)) {
  for (std::size_t i = 1; i < cells_.size(); ++i) {
    if (cells_[i].start < cells_[i - 1].end()) {
      throw Error(ErrorKind::Validation, "rate table cells overlap or are unordered");
    }
  }
}

std::size_t RateTable::locate(Timestamp t) const {
  const auto it = std::upper_bound(
      cells_.begin(), cells_.end(), t,
      [](Timestamp value, const SlotCell& c) { return value.minutes < c.end().minutes; });
  return static_cast<std::size_t>(it - cells_.begin());
}

double RateTable::cumulative(Timestamp from, Timestamp to) const {
  if (to < from) {
    throw Error(ErrorKind::Range, "cumulative intensity needs from <= to");
  }
  double total = 0.0;
  for (std::size_t i = locate(from); i < cells_.size() && cells_[i].start < to; ++i) {
    const auto& c = cells_[i];
    const double lo = std::max(from.minutes, c.start.minutes);
    const double hi = std::min(to.minutes, c.end().minutes);
    if (hi > lo) {
      total += c.lambda * ((hi - lo) / kSlotMinutes);
    }
  }
  return total;
}

std::optional<Timestamp> RateTable::advance(Timestamp from, double amount) const {
  if (amount <= 0.0) {
    return from;
  }
  double remaining = amount;
  for (std::size_t i = locate(from); i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    const double lo = std::max(from.minutes, c.start.minutes);
    const double available = c.lambda * ((c.end().minutes - lo) / kSlotMinutes);
    if (c.lambda > 0.0 && available >= remaining) {
      const double t = lo + remaining / c.lambda * kSlotMinutes;
      return Timestamp{std::min(t, c.end().minutes)};
    }
    remaining -= available;
  }
  return std::nullopt;
}

double RateTable::open_slots_between(Timestamp from, Timestamp to) const {
  double total = 0.0;
  for (std::size_t i = locate(from); i < cells_.size() && cells_[i].start < to; ++i) {
    const auto& c = cells_[i];
    const double lo = std::max(from.minutes, c.start.minutes);
    const double hi = std::min(to.minutes, c.end().minutes);
    if (hi > lo) {
      total += (hi - lo) / kSlotMinutes;
    }
  }
  return total;
}

double RateTable::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), 0.0,
                         [](double acc, const SlotCell& c) { return acc + c.lambda; });
}

IntensityModel IntensityModel::seasonal(GlmModel glm, SlotProfile profile, Calendar calendar) {
  IntensityModel m;
  m.glm_ = std::move(glm);
  m.profile_ = profile;
  m.calendar_ = std::move(calendar);
  return m;
}

IntensityModel IntensityModel::constant(double rate_per_slot, Calendar calendar) {
  if (!(rate_per_slot >= 0.0) || !std::isfinite(rate_per_slot)) {
    throw Error(ErrorKind::Domain, "constant rate must be finite and non-negative");
  }
  IntensityModel m;
  m.constant_rate_ = rate_per_slot;
  m.calendar_ = std::move(calendar);
  m.baseline_rate_ = rate_per_slot;
  return m;
}

IntensityModel IntensityModel::naive_baseline() const {
  if (!baseline_rate_) {
    throw Error(ErrorKind::Validation, "model carries no baseline rate for the naive detector");
  }
  return constant(*baseline_rate_, calendar_);
}

double IntensityModel::slot_fraction(const DayMeta& meta, int slot) const {
  if (meta.is_weekday) {
    for (const auto& o : overrides_) {
      if (o.applies(meta.date)) {
        return slot >= 0 && slot < kWeekdaySlots ? o.weekday[static_cast<std::size_t>(slot)] : 0.0;
      }
    }
  }
  return profile_.fraction(meta.day_of_week, slot);
}

double IntensityModel::daily_total(Date date) const {
  const DayMeta meta = calendar_.meta(date);
  if (!meta.is_open) {
    return 0.0;
  }
  if (!glm_) {
    return constant_rate_ * calendar_.open_slots(date);
  }
  return glm_->predict(meta);
}

double IntensityModel::slot_intensity(Date date, int slot) const {
  const DayMeta meta = calendar_.meta(date);
  const int open = meta.is_open ? calendar_.open_slots(date) : 0;
  if (slot < 0 || slot >= open) {
    return 0.0;
  }
  if (!glm_) {
    return constant_rate_;
  }
  return glm_->predict(meta) * slot_fraction(meta, slot);
}

RateTable IntensityModel::rate_table(Date first, Date last) const {
  std::vector<SlotCell> cells;
  for (Date d = first; d <= last; d += std::chrono::days{1}) {
    const DayMeta meta = calendar_.meta(d);
    if (!meta.is_open) {
      continue;
    }
    const int open = calendar_.open_slots(d);
    const double total = glm_ ? glm_->predict(meta) : 0.0;
    for (int k = 0; k < open; ++k) {
      const double lambda = glm_ ? total * slot_fraction(meta, k) : constant_rate_;
      cells.push_back({d, k, Timestamp::slot_start(d, k), lambda});
    }
  }
  return RateTable(std::move(cells));
}

double IntensityModel::cumulative_intensity(Timestamp from, Timestamp to) const {
  if (to < from) {
    throw Error(ErrorKind::Range, "cumulative intensity needs from <= to");
  }
  if (to == from) {
    return 0.0;
  }
  return rate_table(from.date(), to.date()).cumulative(from, to);
}

} // namespace scusum
