#pragma once

#include <chrono>
#include <compare>
#include <set>
#include <string>
#include <string_view>

namespace scusum {

using Date = std::chrono::sys_days;

// Opening-hours grid: half-hour slots starting at 07:30. Weekdays run to
// 18:30 (22 slots), Saturdays to 12:30 (10 slots), Sundays are closed.
inline constexpr int kWeekdaySlots = 22;
inline constexpr int kSaturdaySlots = 10;
inline constexpr int kFirstSlotMinute = 7 * 60 + 30;
inline constexpr int kSlotMinutes = 30;
inline constexpr double kMinutesPerDay = 24.0 * 60.0;

Date make_date(int year, unsigned month, unsigned day);
Date parse_date(std::string_view text);
std::string format_date(Date date);

// "HH:MM" on the slot grid -> 0-based slot index; throws Validation when the
// time is not half-hour aligned or falls outside 07:30-18:00.
int parse_slot_time(std::string_view text);
std::string format_slot_time(int slot);

/// A naive local instant, stored as minutes since 1970-01-01T00:00.
///
/// Whole minutes are exact, so slot boundaries compare and subtract exactly.
struct Timestamp {
  double minutes = 0.0;

  static Timestamp at(Date date, double minute_of_day) {
    return Timestamp{static_cast<double>(date.time_since_epoch().count()) * kMinutesPerDay +
                     minute_of_day};
  }
  static Timestamp slot_start(Date date, int slot) {
    return at(date, kFirstSlotMinute + slot * kSlotMinutes);
  }
  static Timestamp slot_end(Date date, int slot) { return slot_start(date, slot + 1); }

  Date date() const;
  double minute_of_day() const;

  auto operator<=>(const Timestamp&) const = default;
};

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM" and "YYYY-MM-DDTHH:MM:SS[.fff]".
Timestamp parse_timestamp(std::string_view text);
// Whole-minute instants print as "YYYY-MM-DDTHH:MM", others with microsecond seconds.
std::string format_timestamp(Timestamp t);

enum class Weekday { Mon = 0, Tue, Wed, Thu, Fri, Sat, Sun };

Weekday weekday_of(Date date);
const char* to_string(Weekday day);

struct DayMeta {
  Date date{};
  Weekday day_of_week = Weekday::Mon;
  int month = 1;
  int days_since_origin = 0;
  bool is_weekday = false;
  bool is_day_after_holiday = false;
  bool is_open = false;

  bool operator==(const DayMeta&) const = default;
};

Date default_origin();

/// Derives DayMeta from a date, a day origin and a holiday list.
///
/// Holidays are treated as closed days. Dates before the origin have no
/// metadata (the trend feature would be negative) and raise a Coverage error.
class Calendar {
public:
  Calendar() : Calendar(default_origin(), {}) {}
  Calendar(Date origin, std::set<Date> holidays)
      : origin_(origin), holidays_(std::move(holidays)) {}

  DayMeta meta(Date date) const;
  bool covers(Date date) const { return date >= origin_; }
  bool is_open(Date date) const;
  // Number of open slots on the date: 22, 10 or 0.
  int open_slots(Date date) const;

  Date origin() const { return origin_; }
  const std::set<Date>& holidays() const { return holidays_; }

  bool operator==(const Calendar&) const = default;

private:
  Date origin_;
  std::set<Date> holidays_;
};

} // namespace scusum
