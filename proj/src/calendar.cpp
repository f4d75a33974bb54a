#include "scusum/calendar.hpp"

#include "scusum/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace scusum {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) {
    return false;
  }
  const char* first = text.data() + pos;
  const char* last = first + len;
  for (const char* p = first; p != last; ++p) {
    if (*p < '0' || *p > '9') {
      return false;
    }
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::string quoted(std::string_view text) { return "'" + std::string(text) + "'"; }

} // namespace

Date make_date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw Error(ErrorKind::Validation, "invalid calendar date " + std::to_string(year) + "-" +
                                           std::to_string(month) + "-" + std::to_string(day));
  }
  return Date{ymd};
}

Date parse_date(std::string_view text) {
  int y = 0;
  int m = 0;
  int d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
      !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
    throw Error(ErrorKind::Parse, "expected ISO date YYYY-MM-DD, got " + quoted(text));
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw Error(ErrorKind::Parse, "not a calendar date: " + quoted(text));
  }
  return Date{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int parse_slot_time(std::string_view text) {
  int hh = 0;
  int mm = 0;
  if (text.size() != 5 || text[2] != ':' || !read_int(text, 0, 2, hh) ||
      !read_int(text, 3, 2, mm) || hh > 23 || mm > 59) {
    throw Error(ErrorKind::Parse, "expected time HH:MM, got " + quoted(text));
  }
  const int minute = hh * 60 + mm;
  const int offset = minute - kFirstSlotMinute;
  if (offset % kSlotMinutes != 0 || offset < 0 || offset / kSlotMinutes >= kWeekdaySlots) {
    throw Error(ErrorKind::Validation,
                "slot start " + quoted(text) + " is not a half-hour slot within 07:30-18:00");
  }
  return offset / kSlotMinutes;
}

std::string format_slot_time(int slot) {
  const int minute = kFirstSlotMinute + slot * kSlotMinutes;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

Date Timestamp::date() const {
  return Date{std::chrono::days{static_cast<int>(std::floor(minutes / kMinutesPerDay))}};
}

double Timestamp::minute_of_day() const {
  return minutes - static_cast<double>(date().time_since_epoch().count()) * kMinutesPerDay;
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() == 10) {
    return Timestamp::at(parse_date(text), 0.0);
  }
  if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ')) {
    throw Error(ErrorKind::Parse, "expected ISO timestamp, got " + quoted(text));
  }
  const Date date = parse_date(text.substr(0, 10));
  int hh = 0;
  int mm = 0;
  if (text[13] != ':' || !read_int(text, 11, 2, hh) || !read_int(text, 14, 2, mm) || hh > 23 ||
      mm > 59) {
    throw Error(ErrorKind::Parse, "bad time of day in " + quoted(text));
  }
  double seconds = 0.0;
  if (text.size() > 16) {
    if (text[16] != ':' || text.size() < 19) {
      throw Error(ErrorKind::Parse, "bad seconds in " + quoted(text));
    }
    const std::string_view sec = text.substr(17);
    auto [ptr, ec] = std::from_chars(sec.data(), sec.data() + sec.size(), seconds);
    if (ec != std::errc{} || ptr != sec.data() + sec.size() || seconds < 0.0 || seconds >= 60.0) {
      throw Error(ErrorKind::Parse, "bad seconds in " + quoted(text));
    }
  }
  return Timestamp::at(date, hh * 60.0 + mm + seconds / 60.0);
}

std::string format_timestamp(Timestamp t) {
  const Date date = t.date();
  const double mod = t.minute_of_day();
  const std::string day = format_date(date);
  char buf[40];
  if (mod == std::floor(mod)) {
    const int m = static_cast<int>(mod);
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d", day.c_str(), m / 60, m % 60);
  } else {
    const int m = static_cast<int>(std::floor(mod));
    const double seconds = std::min((mod - m) * 60.0, 59.999999);
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%09.6f", day.c_str(), m / 60, m % 60, seconds);
  }
  return buf;
}

Weekday weekday_of(Date date) {
  // iso_encoding: Monday = 1 ... Sunday = 7
  return static_cast<Weekday>(std::chrono::weekday{date}.iso_encoding() - 1);
}

const char* to_string(Weekday day) {
  static constexpr const char* names[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
  return names[static_cast<int>(day)];
}

Date default_origin() { return make_date(2015, 4, 1); }

DayMeta Calendar::meta(Date date) const {
  if (!covers(date)) {
    throw Error(ErrorKind::Coverage, "no calendar metadata for " + format_date(date) +
                                         " (before origin " + format_date(origin_) + ")");
  }
  DayMeta m;
  m.date = date;
  m.day_of_week = weekday_of(date);
  m.month = static_cast<int>(static_cast<unsigned>(std::chrono::year_month_day{date}.month()));
  m.days_since_origin = (date - origin_).count();
  m.is_weekday = m.day_of_week <= Weekday::Fri;
  m.is_day_after_holiday = holidays_.contains(date - std::chrono::days{1});
  m.is_open = m.day_of_week != Weekday::Sun && !holidays_.contains(date);
  return m;
}

bool Calendar::is_open(Date date) const {
  return weekday_of(date) != Weekday::Sun && !holidays_.contains(date);
}

int Calendar::open_slots(Date date) const {
  if (!is_open(date)) {
    return 0;
  }
  return weekday_of(date) == Weekday::Sat ? kSaturdaySlots : kWeekdaySlots;
}

} // namespace scusum
