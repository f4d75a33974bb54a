#include "scusum/ingest.hpp"

#include "scusum/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>

namespace scusum {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return fields;
}

// Reads a header-led CSV, handing each data row (with its 1-based line
// number) to `row`. Blank lines are skipped.
template <typename RowFn>
void read_csv(std::istream& in, std::span<const std::string_view> header, RowFn&& row) {
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) {
      view.remove_prefix(3);
    }
    if (view.empty()) {
      continue;
    }
    const auto fields = split_fields(view);
    if (!seen_header) {
      if (!std::equal(fields.begin(), fields.end(), header.begin(), header.end())) {
        std::string expected;
        for (auto h : header) {
          expected += expected.empty() ? "" : ",";
          expected += h;
        }
        throw ParseError(lineno, "expected header '" + expected + "'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()));
    }
    try {
      row(fields, lineno);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) {
        throw ParseError(lineno, e.what());
      }
      throw Error(e.kind(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!seen_header) {
    throw ParseError(lineno, "missing header row");
  }
}

std::int64_t parse_count(std::string_view text, std::size_t lineno) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(lineno, "count is not an integer: '" + std::string(text) + "'");
  }
  if (value < 0) {
    throw Error(ErrorKind::Validation,
                "line " + std::to_string(lineno) + ": negative count " + std::to_string(value));
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  }
  return in;
}

constexpr std::string_view kDailyHeader[] = {"date", "count"};
constexpr std::string_view kSlotHeader[] = {"date", "slot_start", "count"};
constexpr std::string_view kEventHeader[] = {"timestamp"};

} // namespace

Date Dataset::first_date() const {
  if (empty()) {
    throw Error(ErrorKind::Range, "dataset is empty");
  }
  if (daily.empty()) {
    return slots.front().date;
  }
  if (slots.empty()) {
    return daily.front().date;
  }
  return std::min(daily.front().date, slots.front().date);
}

Date Dataset::last_date() const {
  if (empty()) {
    throw Error(ErrorKind::Range, "dataset is empty");
  }
  if (daily.empty()) {
    return slots.back().date;
  }
  if (slots.empty()) {
    return daily.back().date;
  }
  return std::max(daily.back().date, slots.back().date);
}

Dataset make_dataset(std::vector<DailyRecord> daily, std::vector<SlotRecord> slots,
                     Calendar calendar) {
  std::ranges::sort(daily, {}, &DailyRecord::date);
  for (std::size_t i = 1; i < daily.size(); ++i) {
    if (daily[i].date == daily[i - 1].date) {
      throw Error(ErrorKind::DuplicateKey, "duplicate daily record for " + format_date(daily[i].date));
    }
  }
  std::ranges::sort(slots, [](const SlotRecord& a, const SlotRecord& b) {
    return std::tie(a.date, a.slot) < std::tie(b.date, b.slot);
  });
  for (std::size_t i = 1; i < slots.size(); ++i) {
    if (slots[i].date == slots[i - 1].date && slots[i].slot == slots[i - 1].slot) {
      throw Error(ErrorKind::DuplicateKey, "duplicate slot record for " +
                                               format_date(slots[i].date) + " " +
                                               format_slot_time(slots[i].slot));
    }
  }

  Dataset ds;
  for (const auto& r : daily) {
    if (r.count < 0) {
      throw Error(ErrorKind::Validation, "negative count on " + format_date(r.date));
    }
    ds.meta.try_emplace(r.date, calendar.meta(r.date));
  }
  for (const auto& r : slots) {
    if (r.count < 0) {
      throw Error(ErrorKind::Validation, "negative count on " + format_date(r.date));
    }
    if (r.slot < 0 || r.slot >= kWeekdaySlots) {
      throw Error(ErrorKind::Validation, "slot index out of range on " + format_date(r.date));
    }
    const auto [it, inserted] = ds.meta.try_emplace(r.date, calendar.meta(r.date));
    const Weekday dow = it->second.day_of_week;
    if (dow == Weekday::Sun) {
      throw Error(ErrorKind::Validation, "slot record on a Sunday: " + format_date(r.date));
    }
    if (dow == Weekday::Sat && r.slot >= kSaturdaySlots) {
      throw Error(ErrorKind::Validation, "Saturday slot " + format_slot_time(r.slot) +
                                             " is outside opening hours on " +
                                             format_date(r.date));
    }
  }
  ds.daily = std::move(daily);
  ds.slots = std::move(slots);
  ds.calendar = std::move(calendar);
  return ds;
}

std::vector<DailyRecord> read_daily_csv(std::istream& in) {
  std::vector<DailyRecord> rows;
  read_csv(in, kDailyHeader, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    rows.push_back({parse_date(f[0]), parse_count(f[1], lineno)});
  });
  return rows;
}

std::vector<SlotRecord> read_slot_csv(std::istream& in) {
  std::vector<SlotRecord> rows;
  read_csv(in, kSlotHeader, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    rows.push_back({parse_date(f[0]), parse_slot_time(f[1]), parse_count(f[2], lineno)});
  });
  std::ranges::sort(rows, [](const SlotRecord& a, const SlotRecord& b) {
    return std::tie(a.date, a.slot) < std::tie(b.date, b.slot);
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date && rows[i].slot == rows[i - 1].slot) {
      throw Error(ErrorKind::DuplicateKey, "duplicate slot record for " +
                                               format_date(rows[i].date) + " " +
                                               format_slot_time(rows[i].slot));
    }
  }
  return rows;
}

std::vector<Timestamp> read_event_csv(std::istream& in) {
  std::vector<Timestamp> events;
  read_csv(in, kEventHeader, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    const Timestamp t = parse_timestamp(f[0]);
    if (!events.empty() && t < events.back()) {
      throw ParseError(lineno, "event times must be in non-decreasing order");
    }
    events.push_back(t);
  });
  return events;
}

std::set<Date> read_holidays(std::istream& in) {
  std::set<Date> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty() || view.starts_with('#') || view == "date") {
      continue;
    }
    try {
      out.insert(parse_date(view));
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

Dataset parse_daily_csv(const std::filesystem::path& path, const std::set<Date>& holidays,
                        Date origin) {
  auto in = open_input(path);
  return make_dataset(read_daily_csv(in), {}, Calendar(origin, holidays));
}

std::vector<SlotRecord> parse_slot_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_slot_csv(in);
}

std::vector<Timestamp> parse_event_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_event_csv(in);
}

std::set<Date> parse_holidays(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_holidays(in);
}

void write_daily_csv(std::ostream& out, std::span<const DailyRecord> rows) {
  out << "date,count\n";
  for (const auto& r : rows) {
    out << format_date(r.date) << ',' << r.count << '\n';
  }
}

void write_slot_csv(std::ostream& out, std::span<const SlotRecord> rows) {
  out << "date,slot_start,count\n";
  for (const auto& r : rows) {
    out << format_date(r.date) << ',' << format_slot_time(r.slot) << ',' << r.count << '\n';
  }
}

void write_event_csv(std::ostream& out, std::span<const Timestamp> events) {
  out << "timestamp\n";
  for (const auto t : events) {
    out << format_timestamp(t) << '\n';
  }
}

std::vector<Gap> detect_gaps(std::span<const Date> present, const Calendar& calendar) {
  std::vector<Gap> gaps;
  if (present.empty()) {
    return gaps;
  }
  std::set<Date> have(present.begin(), present.end());
  std::optional<Gap> current;
  for (Date d = *have.begin(); d <= *have.rbegin(); d += std::chrono::days{1}) {
    if (have.contains(d)) {
      if (current) {
        gaps.push_back(*current);
        current.reset();
      }
      continue;
    }
    if (!calendar.is_open(d)) {
      continue;
    }
    if (current) {
      current->last = d;
    } else {
      current = Gap{d, d};
    }
  }
  return gaps;
}

std::vector<Gap> detect_gaps(const Dataset& dataset) {
  std::vector<Date> dates;
  if (!dataset.daily.empty()) {
    dates.reserve(dataset.daily.size());
    for (const auto& r : dataset.daily) {
      dates.push_back(r.date);
    }
  } else {
    for (const auto& r : dataset.slots) {
      if (dates.empty() || dates.back() != r.date) {
        dates.push_back(r.date);
      }
    }
  }
  return detect_gaps(dates, dataset.calendar);
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, Date split_date) {
  if (dataset.empty()) {
    throw Error(ErrorKind::Range, "cannot split an empty dataset");
  }
  if (split_date <= dataset.first_date() || split_date > dataset.last_date()) {
    throw Error(ErrorKind::Range, "split date " + format_date(split_date) +
                                      " outside data range (" +
                                      format_date(dataset.first_date()) + " .. " +
                                      format_date(dataset.last_date()) + "]");
  }
  Dataset train;
  Dataset test;
  for (Dataset* part : {&train, &test}) {
    part->calendar = dataset.calendar;
    part->split_date = split_date;
  }
  for (const auto& r : dataset.daily) {
    (r.date < split_date ? train : test).daily.push_back(r);
  }
  for (const auto& r : dataset.slots) {
    (r.date < split_date ? train : test).slots.push_back(r);
  }
  for (const auto& [date, m] : dataset.meta) {
    (date < split_date ? train : test).meta.emplace(date, m);
  }
  return {std::move(train), std::move(test)};
}

std::map<Date, std::int64_t> slot_day_totals(std::span<const SlotRecord> slots) {
  std::map<Date, std::int64_t> totals;
  for (const auto& r : slots) {
    totals[r.date] += r.count;
  }
  return totals;
}

} // namespace scusum
