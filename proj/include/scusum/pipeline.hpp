#pragma once

#include "scusum/calendar.hpp"
#include "scusum/detect.hpp"
#include "scusum/simulate.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace scusum {

inline constexpr const char* kToolName = "seasonal-cusum";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kOutputSchemaVersion = 1;

using Path = std::filesystem::path;

/// Detector settings shared by calibrate, detect and evaluate. rho > 1
/// watches for an increase, 0 < rho < 1 for a decrease. Exactly one of m
/// and pi is given; pi triggers a calibration with the Monte Carlo fields.
struct DetectorOptions {
  double rho = 1.2;
  std::optional<double> m;
  std::optional<double> pi;
  ObservationMode mode = ObservationMode::AggregatedCounts;
  bool reset_on_alarm = true;
  bool naive_lambda = false;
  bool double_sided = false;
  std::optional<double> rho_down; // decrease side of a double-sided run, default 1/rho
  int replications = 1000;
  int horizon_days = 365;
  double tolerance_rel = 0.02;
  std::uint64_t seed = 1;
};

struct FitOptions {
  Path daily;
  std::optional<Path> slots;
  std::optional<Path> holidays;
  std::optional<Date> origin;
  std::optional<Date> split_date;
  // Encode a known recurring intraday pattern as a profile override.
  ScenarioKind scenario = ScenarioKind::Identity;
  Path out;
};

struct CalibrateOptions {
  Path model;
  DetectorOptions detector;
  std::optional<Date> start;
  Path out;
};

struct SimulateOptions {
  Path model;
  Date start{};
  Date end{};
  std::uint64_t seed = 1;
  std::optional<Timestamp> theta;
  double rho = 1.0;
  bool events = false;
  ScenarioKind scenario = ScenarioKind::Identity;
  Path out;
};

struct DetectOptions {
  Path model;
  std::optional<Path> series; // slot counts
  std::optional<Path> events; // event times
  DetectorOptions detector;
  ScenarioKind scenario = ScenarioKind::Identity;
  Path out;
};

struct EvaluateOptions {
  Path model;
  DetectorOptions detector; // detector.rho is also the simulated change factor
  Date start{};
  Date end{};
  std::vector<Timestamp> thetas; // empty: 07:30 and 12:30 on the first five open days
  int replications = 500;
  std::uint64_t seed = 1;
  Path out;
};

struct ScenarioOptions {
  Path series;
  std::optional<Path> model; // supplies the weekday profile; else fitted from the series
  ScenarioKind kind = ScenarioKind::PostponeThirdTuesdayMorning;
  Path out;
};

struct CommandReport {
  std::vector<std::string> outputs; // file names under the output directory
  std::vector<std::string> warnings;
  std::string summary;
};

// Each command writes its artifacts and manifest.json into `out` (created if
// needed) and throws scusum::Error on failure.
CommandReport cmd_fit(const FitOptions& options);
CommandReport cmd_calibrate(const CalibrateOptions& options);
CommandReport cmd_simulate(const SimulateOptions& options);
CommandReport cmd_detect(const DetectOptions& options);
CommandReport cmd_evaluate(const EvaluateOptions& options);
CommandReport cmd_scenario(const ScenarioOptions& options);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

} // namespace scusum
