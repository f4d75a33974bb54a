#pragma once

#include "scusum/calendar.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace scusum {

struct DailyRecord {
  Date date{};
  std::int64_t count = 0;

  bool operator==(const DailyRecord&) const = default;
};

struct SlotRecord {
  Date date{};
  int slot = 0; // 0-based from 07:30
  std::int64_t count = 0;

  Timestamp start() const { return Timestamp::slot_start(date, slot); }
  Timestamp end() const { return Timestamp::slot_end(date, slot); }

  bool operator==(const SlotRecord&) const = default;
};

/// Daily totals and half-hour counts together with the calendar that derives
/// their metadata. Records are sorted and keyed uniquely; `meta` has an entry
/// for every date that appears in either series.
struct Dataset {
  std::vector<DailyRecord> daily;
  std::vector<SlotRecord> slots;
  std::map<Date, DayMeta> meta;
  Calendar calendar;
  std::optional<Date> split_date;

  bool empty() const { return daily.empty() && slots.empty(); }
  Date first_date() const;
  Date last_date() const;

  bool operator==(const Dataset&) const = default;
};

struct Gap {
  Date first{};
  Date last{};

  bool operator==(const Gap&) const = default;
};

// Sorts, validates (non-negative counts, unique keys, slots on the day's
// grid, no Sunday records) and derives metadata.
Dataset make_dataset(std::vector<DailyRecord> daily, std::vector<SlotRecord> slots,
                     Calendar calendar);

std::vector<DailyRecord> read_daily_csv(std::istream& in);
std::vector<SlotRecord> read_slot_csv(std::istream& in);
std::set<Date> read_holidays(std::istream& in);
// Single "timestamp" column; times must be non-decreasing.
std::vector<Timestamp> read_event_csv(std::istream& in);

Dataset parse_daily_csv(const std::filesystem::path& path, const std::set<Date>& holidays,
                        Date origin);
std::vector<SlotRecord> parse_slot_csv(const std::filesystem::path& path);
std::set<Date> parse_holidays(const std::filesystem::path& path);
std::vector<Timestamp> parse_event_csv(const std::filesystem::path& path);

void write_daily_csv(std::ostream& out, std::span<const DailyRecord> rows);
void write_slot_csv(std::ostream& out, std::span<const SlotRecord> rows);
void write_event_csv(std::ostream& out, std::span<const Timestamp> events);

// Maximal runs of open dates with no record between the first and last
// present dates. Runs bridge closed days, so a missing month is one gap.
std::vector<Gap> detect_gaps(std::span<const Date> present, const Calendar& calendar);
// Uses the daily series when present, otherwise the dates of the slot series.
std::vector<Gap> detect_gaps(const Dataset& dataset);

std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, Date split_date);

// Per-date daily totals summed from slot records.
std::map<Date, std::int64_t> slot_day_totals(std::span<const SlotRecord> slots);

} // namespace scusum
