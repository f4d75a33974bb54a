#pragma once

#include "scusum/calendar.hpp"
#include "scusum/glm.hpp"
#include "scusum/ingest.hpp"
#include "scusum/intensity.hpp"
#include "scusum/profile.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scusum {

using Rng = std::mt19937_64;

// Stream seed for replication `index`: two splitmix64 rounds over (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Intensity is lambda_t before `theta` and rho * lambda_t from `theta` on.
/// No theta means the change never happens.
struct ChangeSpec {
  std::optional<Timestamp> theta;
  double rho = 1.0;

  bool active_at(Timestamp t) const { return theta && t >= *theta; }

  bool operator==(const ChangeSpec&) const = default;
};

struct SimPath {
  std::vector<Timestamp> event_times;
  bool has_events = false;
  // Every open slot of the horizon, zeros included.
  std::vector<SlotRecord> slot_counts;
  ChangeSpec change;
  std::uint64_t seed = 0;
  std::int64_t events_before_change = 0;
};

// Poisson means of the slot before and after the change point.
struct SlotMeans {
  double before = 0.0;
  double after = 0.0;
};

SlotMeans slot_means(const SlotCell& cell, const ChangeSpec& change);

// Poisson draw that treats a zero mean as a point mass at zero.
std::int64_t draw_poisson(double mean, Rng& rng);

// Counts of one slot before and after the change, drawn in that order.
std::pair<std::int64_t, std::int64_t> draw_slot_count(const SlotCell& cell,
                                                      const ChangeSpec& change, Rng& rng);

/// Event times of one slot by thinning against the constant majorant
/// lambda * max(1, rho). Appends strictly increasing times in [start, end).
void draw_slot_events(const SlotCell& cell, const ChangeSpec& change, Rng& rng,
                      std::vector<Timestamp>& out);

SimPath simulate_events(const RateTable& rates, const ChangeSpec& change, std::uint64_t seed);
SimPath simulate_events(const IntensityModel& model, const ChangeSpec& change, Date first,
                        Date last, std::uint64_t seed);

SimPath simulate_slot_counts(const RateTable& rates, const ChangeSpec& change,
                             std::uint64_t seed);
SimPath simulate_slot_counts(const IntensityModel& model, const ChangeSpec& change, Date first,
                             Date last, std::uint64_t seed);

// Poisson daily totals exp(x . coefficients) on every open day of [first, last].
std::vector<DailyRecord> simulate_daily_counts(const GlmModel& glm, const Calendar& calendar,
                                               Date first, Date last, std::uint64_t seed);

std::vector<SlotRecord> histogram(std::span<const Timestamp> events, const RateTable& rates);

enum class ScenarioKind { Identity, PostponeThirdTuesdayMorning };

const char* to_string(ScenarioKind kind);
// "identity" or "postpone-third-tuesday".
ScenarioKind parse_scenario_kind(std::string_view text);

struct ScenarioTransform {
  ScenarioKind kind = ScenarioKind::Identity;
  int period_weeks = 3;
  int boundary_slot = 10; // first afternoon slot, 12:30
};

struct ScenarioResult {
  std::vector<SlotRecord> slots;
  std::optional<Date> anchor;
  std::vector<Date> affected;
};

/// Moves the morning calls of every third Tuesday (counted from the first
/// Tuesday in the series) onto that afternoon. The morning total is split
/// over the afternoon slots in proportion to the weekday profile, rounding
/// by largest remainder with ties going to the earlier slot, so each day's
/// total is preserved. Affected Tuesdays must carry all weekday slots; a
/// Tuesday with no records at all is skipped.
ScenarioResult apply_scenario(std::span<const SlotRecord> slots, const ScenarioTransform& transform,
                              const SlotProfile& profile);

// A smooth weekday profile with a late-morning peak and a smaller
// early-afternoon one; Saturdays reuse the first ten slots, renormalized.
SlotProfile synthetic_profile();

// The richest candidate factor set (trend, month, day of week, day after
// holiday) with mild monthly seasonality and a Monday daily volume of
// `monday_volume` at the origin.
GlmModel synthetic_glm(double monday_volume, double trend_per_year = 0.0);

/// An abstract seasonal horizon for illustrating a single change: three
/// consecutive weekdays with a sinusoid-like intraday profile, time measured
/// in open days so that theta = 1.5 falls at 13:00 on the second day.
struct IllustrativeSetup {
  IntensityModel model;
  Date first{};
  Date last{};
  ChangeSpec change;
};

IllustrativeSetup illustrative_setup(double daily_volume = 600.0, double theta_days = 1.5,
                                     double rho = 1.3);

} // namespace scusum
