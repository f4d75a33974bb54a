#include "scusum/pipeline.hpp"

#include "scusum/calibrate.hpp"
#include "scusum/error.hpp"
#include "scusum/evaluate.hpp"
#include "scusum/glm.hpp"
#include "scusum/ingest.hpp"
#include "scusum/model_io.hpp"
#include "scusum/profile.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace scusum {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class OutputDir {
public:
  explicit OutputDir(const Path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
      throw Error(ErrorKind::Io, "cannot create output directory " + dir_.string());
    }
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out || !(out << content)) {
      throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
    }
    report.outputs.push_back(name);
  }

  void write_json(const std::string& name, const ordered_json& doc) { write(name, doc.dump(2) + "\n"); }

  void warn(std::string message) { report.warnings.push_back(std::move(message)); }

  CommandReport finish(const char* command, const ordered_json& parameters) {
    ordered_json manifest;
    manifest["schema_version"] = kOutputSchemaVersion;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command"] = command;
    manifest["parameters"] = parameters;
    manifest["outputs"] = report.outputs;
    manifest["warnings"] = report.warnings;
    write_json("manifest.json", manifest);
    return report;
  }

  CommandReport report;

private:
  Path dir_;
};

template <class T>
ordered_json optional_json(const std::optional<T>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

ordered_json optional_path(const std::optional<Path>& p) {
  return p ? ordered_json(p->string()) : ordered_json(nullptr);
}

ordered_json optional_date(const std::optional<Date>& d) {
  return d ? ordered_json(format_date(*d)) : ordered_json(nullptr);
}

ordered_json detector_json(const DetectorOptions& d) {
  return {{"rho", d.rho},
          {"m", optional_json(d.m)},
          {"pi", optional_json(d.pi)},
          {"mode", to_string(d.mode)},
          {"reset_on_alarm", d.reset_on_alarm},
          {"naive_lambda", d.naive_lambda},
          {"double_sided", d.double_sided},
          {"rho_down", optional_json(d.rho_down)},
          {"replications", d.replications},
          {"horizon_days", d.horizon_days},
          {"tolerance_rel", d.tolerance_rel},
          {"seed", d.seed}};
}

IntensityModel load_for_detection(const Path& path, const DetectorOptions& d) {
  IntensityModel model = load_model(path);
  return d.naive_lambda ? model.naive_baseline() : model;
}

DetectorConfig make_config(double rho, double m, const DetectorOptions& d) {
  DetectorConfig c;
  c.rho = rho;
  c.threshold = m;
  c.direction = rho > 1.0 ? Direction::Increase : Direction::Decrease;
  c.mode = d.mode;
  c.reset_on_alarm = d.reset_on_alarm;
  c.validate();
  return c;
}

ordered_json calibration_json(const CalibrationResult& r, const CalibrationTarget& t,
                              const DetectorConfig& c, const IntensityModel& model) {
  ordered_json trace = ordered_json::array();
  for (const auto& e : r.trace) {
    trace.push_back({{"m", e.m},
                     {"arl", e.arl},
                     {"standard_error", e.standard_error},
                     {"censored_fraction", e.censored_fraction}});
  }
  return {{"schema_version", kOutputSchemaVersion},
          {"pi", t.pi},
          {"rho", c.rho},
          {"direction", to_string(c.direction)},
          {"mode", to_string(c.mode)},
          {"threshold_m", r.threshold_m},
          {"arl_estimate", r.arl_estimate},
          {"arl_stderr", r.arl_stderr},
          {"censored_fraction", r.censored_fraction},
          {"expected_days_to_alarm", r.expected_days_to_alarm},
          {"replications", t.replications},
          {"seed", t.seed},
          {"start", format_date(t.first_day(model))},
          {"horizon_days", t.horizon_days},
          {"tolerance_rel", t.tolerance_rel},
          {"expansions", r.expansions},
          {"trace", trace}};
}

// The threshold from --m, or a calibration to --pi written to calibration.json.
double resolve_threshold(const IntensityModel& model, double rho, const DetectorOptions& d,
                         std::optional<Date> start, OutputDir& out,
                         const std::string& file = "calibration.json") {
  if (d.m.has_value() == d.pi.has_value()) {
    throw Error(ErrorKind::Validation, "give exactly one of --m and --pi");
  }
  if (d.m) {
    return *d.m;
  }
  CalibrationTarget target;
  target.pi = *d.pi;
  target.replications = d.replications;
  target.horizon_days = d.horizon_days;
  target.tolerance_rel = d.tolerance_rel;
  target.seed = d.seed;
  target.start = start;
  const DetectorConfig config = make_config(rho, 1.0, d);
  const auto result = calibrate_threshold(model, config, target);
  out.write_json(file, calibration_json(result, target, config, model));
  return result.threshold_m;
}

std::string vpath_csv(std::span<const VPathRow> rows) {
  std::string s = "timestamp,v,lambda_increment,count,alarm_flag\n";
  for (const auto& r : rows) {
    s += format_timestamp(r.time);
    s += ',';
    s += format_double(r.v);
    s += ',';
    s += format_double(r.lambda_increment);
    s += ',';
    s += std::to_string(r.count);
    s += r.alarm ? ",1\n" : ",0\n";
  }
  return s;
}

std::string alarms_jsonl(std::span<const AlarmEvent> alarms) {
  std::string s;
  for (const auto& a : alarms) {
    ordered_json line = {{"time", format_timestamp(a.time)},
                         {"direction", to_string(a.direction)},
                         {"v_at_alarm", a.v_at_alarm},
                         {"events_at_alarm", a.events_at_alarm}};
    s += line.dump() + "\n";
  }
  return s;
}

template <class Write>
std::string to_text(Write write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

ordered_json busyness_json(const std::array<BusynessGroup, 4>& groups) {
  ordered_json out = ordered_json::array();
  for (const auto& g : groups) {
    out.push_back({{"quartile", g.quartile},
                   {"days", g.days},
                   {"min_total", g.min_total},
                   {"max_total", g.max_total},
                   {"fractions", g.fractions}});
  }
  return out;
}

ordered_json range_json(const Dataset& d) {
  if (d.empty()) {
    return nullptr;
  }
  return {{"first", format_date(d.first_date())},
          {"last", format_date(d.last_date())},
          {"daily_records", d.daily.size()},
          {"slot_records", d.slots.size()}};
}

std::optional<Date> first_tuesday(std::span<const SlotRecord> slots) {
  std::optional<Date> best;
  for (const auto& r : slots) {
    if (weekday_of(r.date) == Weekday::Tue && (!best || r.date < *best)) {
      best = r.date;
    }
  }
  return best;
}

std::vector<DailyRecord> open_day_totals(std::span<const SlotRecord> slots,
                                         const IntensityModel& model, Date first, Date last) {
  const auto totals = slot_day_totals(slots);
  std::vector<DailyRecord> out;
  for (Date d = first; d <= last; d += std::chrono::days{1}) {
    if (model.calendar().is_open(d)) {
      const auto it = totals.find(d);
      out.push_back({d, it == totals.end() ? 0 : it->second});
    }
  }
  return out;
}

} // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

CommandReport cmd_fit(const FitOptions& o) {
  OutputDir out(o.out);
  const std::set<Date> holidays = o.holidays ? parse_holidays(*o.holidays) : std::set<Date>{};
  Dataset data = parse_daily_csv(o.daily, holidays, o.origin.value_or(default_origin()));
  if (o.slots) {
    data = make_dataset(std::move(data.daily), parse_slot_csv(*o.slots), data.calendar);
  } else {
    out.warn("no slot file given: the intraday profile falls back to uniform");
  }
  const Calendar& calendar = data.calendar;
  const auto gaps = detect_gaps(data);

  Dataset train = data;
  Dataset test;
  if (o.split_date) {
    std::tie(train, test) = split_train_test(data, *o.split_date);
  }
  std::vector<DayCount> days;
  std::size_t closed_days = 0;
  double calls = 0.0;
  double open_slots = 0.0;
  for (const auto& r : train.daily) {
    const DayMeta meta = calendar.meta(r.date);
    if (!meta.is_open) {
      ++closed_days;
      continue;
    }
    days.push_back({meta, r.count});
    calls += static_cast<double>(r.count);
    open_slots += calendar.open_slots(r.date);
  }
  if (days.empty()) {
    throw Error(ErrorKind::Validation, "the training set has no open days");
  }
  if (closed_days > 0) {
    out.warn(std::to_string(closed_days) +
             " daily records fall on Sundays or holidays and were left out of the fit");
  }
  if (!gaps.empty()) {
    out.warn(std::to_string(gaps.size()) + " gap(s) of missing open days; see fit_report.json");
  }

  const auto selection = select_model(default_candidates(), days);

  SlotProfile profile = SlotProfile::uniform();
  std::optional<BusynessCheck> busyness;
  if (!train.slots.empty()) {
    try {
      profile = fit_slot_profile(train.slots, calendar);
      busyness = busyness_quartile_check(train.slots, calendar);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Validation) {
        throw;
      }
      out.warn(std::string("slot profile not fitted, using uniform: ") + e.what());
    }
  }

  IntensityModel model = IntensityModel::seasonal(selection.best, profile, calendar);
  model.set_baseline_rate(calls / open_slots);
  if (o.scenario == ScenarioKind::PostponeThirdTuesdayMorning) {
    const auto anchor = first_tuesday(train.slots);
    if (!anchor) {
      throw Error(ErrorKind::Validation, "scenario-aware fit needs slot data on a Tuesday");
    }
    model.add_override(fit_profile_override(train.slots, calendar, *anchor, 21));
  }
  save_model(model, o.out / "model.json");
  out.report.outputs.push_back("model.json");

  ordered_json candidates = ordered_json::array();
  std::string table = "model,columns,n_obs,log_likelihood,bic,selected\n";
  for (const auto& c : selection.candidates) {
    const bool selected = c.model && *c.model == selection.best;
    ordered_json row = {{"model", c.spec.label()}, {"columns", c.spec.columns()}};
    if (c.model) {
      row["n_obs"] = c.model->n_obs;
      row["log_likelihood"] = c.model->log_likelihood;
      row["bic"] = c.model->bic;
      row["iterations"] = c.model->iterations;
      table += c.spec.label() + "," + std::to_string(c.spec.columns()) + "," +
               std::to_string(c.model->n_obs) + "," + format_double(c.model->log_likelihood) +
               "," + format_double(c.model->bic) + (selected ? ",1\n" : ",0\n");
    } else {
      row["error"] = c.error;
      table += c.spec.label() + "," + std::to_string(c.spec.columns()) + ",,,,0\n";
    }
    row["selected"] = selected;
    candidates.push_back(row);
  }
  ordered_json gap_list = ordered_json::array();
  for (const auto& g : gaps) {
    gap_list.push_back({{"first", format_date(g.first)}, {"last", format_date(g.last)}});
  }
  ordered_json report;
  report["schema_version"] = kOutputSchemaVersion;
  report["train"] = range_json(train);
  report["test"] = range_json(test);
  report["selected"] = selection.best.spec.label();
  report["candidates"] = candidates;
  report["baseline_rate"] = calls / open_slots;
  report["gaps"] = gap_list;
  report["closed_days_skipped"] = closed_days;
  report["busyness"] = busyness ? ordered_json{{"weekday", busyness_json(busyness->weekday)},
                                               {"saturday", busyness_json(busyness->saturday)}}
                                : ordered_json(nullptr);
  report["overrides"] = model.overrides().size();
  report["warnings"] = out.report.warnings;
  out.write_json("fit_report.json", report);
  out.write("bic_table.csv", table);

  out.report.summary = "selected " + selection.best.spec.label() + " (BIC " +
                       format_double(selection.best.bic) + ")";
  return out.finish("fit", {{"daily", o.daily.string()},
                            {"slots", optional_path(o.slots)},
                            {"holidays", optional_path(o.holidays)},
                            {"origin", optional_date(o.origin)},
                            {"split_date", optional_date(o.split_date)},
                            {"scenario", to_string(o.scenario)}});
}

CommandReport cmd_calibrate(const CalibrateOptions& o) {
  OutputDir out(o.out);
  if (!o.detector.pi || o.detector.m) {
    throw Error(ErrorKind::Validation, "calibrate needs --pi and no --m");
  }
  const IntensityModel model = load_for_detection(o.model, o.detector);
  const double m = resolve_threshold(model, o.detector.rho, o.detector, o.start, out);
  out.report.summary = "threshold m = " + format_double(m);
  return out.finish("calibrate", {{"model", o.model.string()},
                                  {"detector", detector_json(o.detector)},
                                  {"start", optional_date(o.start)}});
}

CommandReport cmd_simulate(const SimulateOptions& o) {
  OutputDir out(o.out);
  if (o.end < o.start) {
    throw Error(ErrorKind::Validation, "simulation end precedes its start");
  }
  if (o.events && o.scenario != ScenarioKind::Identity) {
    throw Error(ErrorKind::Validation, "scenarios transform slot counts, not event times");
  }
  if (!(o.rho > 0.0) || !std::isfinite(o.rho)) {
    throw Error(ErrorKind::Domain, "change factor rho must be positive");
  }
  const IntensityModel model = load_model(o.model);
  const RateTable rates = model.rate_table(o.start, o.end);
  const ChangeSpec change{o.theta, o.rho};
  SimPath path = o.events ? simulate_events(rates, change, o.seed)
                          : simulate_slot_counts(rates, change, o.seed);
  ScenarioResult scenario = apply_scenario(path.slot_counts, {o.scenario}, model.profile());

  out.write("slots.csv", to_text([&](std::ostream& os) { write_slot_csv(os, scenario.slots); }));
  const auto daily = open_day_totals(scenario.slots, model, o.start, o.end);
  out.write("daily.csv", to_text([&](std::ostream& os) { write_daily_csv(os, daily); }));
  if (o.events) {
    out.write("events.csv",
              to_text([&](std::ostream& os) { write_event_csv(os, path.event_times); }));
  }
  ordered_json affected = ordered_json::array();
  for (const auto d : scenario.affected) {
    affected.push_back(format_date(d));
  }
  std::int64_t total = 0;
  for (const auto& r : scenario.slots) {
    total += r.count;
  }
  ordered_json sidecar;
  sidecar["schema_version"] = kOutputSchemaVersion;
  sidecar["seed"] = o.seed;
  sidecar["change"] = {{"theta", o.theta ? ordered_json(format_timestamp(*o.theta)) : ordered_json(nullptr)},
                       {"rho", o.rho}};
  sidecar["start"] = format_date(o.start);
  sidecar["end"] = format_date(o.end);
  sidecar["event_times"] = o.events;
  sidecar["total_events"] = total;
  sidecar["events_before_change"] = path.events_before_change;
  sidecar["expected_events"] = rates.total();
  sidecar["scenario"] = to_string(o.scenario);
  sidecar["scenario_anchor"] = optional_date(scenario.anchor);
  sidecar["affected_dates"] = affected;
  out.write_json("sim.json", sidecar);

  out.report.summary = std::to_string(total) + " simulated events over " +
                       std::to_string(rates.cells().size()) + " open slots";
  return out.finish("simulate",
                    {{"model", o.model.string()},
                     {"start", format_date(o.start)},
                     {"end", format_date(o.end)},
                     {"seed", o.seed},
                     {"theta", o.theta ? ordered_json(format_timestamp(*o.theta)) : ordered_json(nullptr)},
                     {"rho", o.rho},
                     {"events", o.events},
                     {"scenario", to_string(o.scenario)}});
}

CommandReport cmd_detect(const DetectOptions& o) {
  OutputDir out(o.out);
  if (o.series.has_value() == o.events.has_value()) {
    throw Error(ErrorKind::Validation, "give exactly one of --series and --events");
  }
  const DetectorOptions& d = o.detector;
  const IntensityModel model = load_for_detection(o.model, d);

  std::vector<SlotRecord> series;
  std::vector<Timestamp> events;
  ScenarioResult scenario;
  Date first{};
  Date last{};
  if (o.series) {
    series = parse_slot_csv(*o.series);
    if (series.empty()) {
      throw Error(ErrorKind::Validation, "slot series is empty");
    }
    scenario = apply_scenario(series, {o.scenario}, model.profile());
    series = std::move(scenario.slots);
    first = series.front().date;
    last = series.back().date;
  } else {
    if (o.scenario != ScenarioKind::Identity) {
      throw Error(ErrorKind::Validation, "scenarios transform slot counts, not event times");
    }
    events = parse_event_csv(*o.events);
    if (events.empty()) {
      throw Error(ErrorKind::Validation, "event file is empty");
    }
    first = events.front().date();
    last = events.back().date();
  }

  const double m = resolve_threshold(model, d.rho, d, first, out);
  const DetectorConfig up = make_config(d.rho, m, d);
  std::optional<DetectorConfig> down;
  std::optional<double> m_down;
  if (d.double_sided) {
    if (d.rho <= 1.0) {
      throw Error(ErrorKind::Validation, "double-sided runs take the increase factor rho > 1");
    }
    const double rho_down = d.rho_down.value_or(1.0 / d.rho);
    m_down = resolve_threshold(model, rho_down, d, first, out, "calibration_down.json");
    down = make_config(rho_down, *m_down, d);
  }

  auto run = [&](const DetectorConfig& c) {
    if (o.series) {
      if (c.mode != ObservationMode::AggregatedCounts) {
        throw Error(ErrorKind::Validation, "slot series need --mode aggregated");
      }
      return run_detector(series, model, c);
    }
    return run_detector_events(events, model.rate_table(first, last), c);
  };
  const DetectorRun primary = run(up);
  std::vector<AlarmEvent> alarms = primary.alarms;
  std::optional<DetectorRun> secondary;
  if (down) {
    secondary = run(*down);
    alarms.insert(alarms.end(), secondary->alarms.begin(), secondary->alarms.end());
    std::stable_sort(alarms.begin(), alarms.end(),
                     [](const AlarmEvent& a, const AlarmEvent& b) { return a.time < b.time; });
  }

  out.write("vpath.csv", vpath_csv(primary.path));
  if (secondary) {
    out.write("vpath_down.csv", vpath_csv(secondary->path));
  }
  out.write("alarms.jsonl", alarms_jsonl(alarms));

  auto exceedance = [](const DetectorRun& r, double threshold) {
    for (const auto& row : r.path) {
      if (row.lambda_increment > 0.0) {
        return ordered_json(exceedance_fraction(r.path, threshold));
      }
    }
    return ordered_json(nullptr);
  };
  ordered_json affected = ordered_json::array();
  for (const auto day : scenario.affected) {
    affected.push_back(format_date(day));
  }
  ordered_json summary;
  summary["schema_version"] = kOutputSchemaVersion;
  summary["threshold_m"] = m;
  summary["calibrated"] = d.pi.has_value();
  summary["rho"] = d.rho;
  summary["direction"] = to_string(up.direction);
  summary["mode"] = to_string(up.mode);
  summary["naive_lambda"] = d.naive_lambda;
  summary["reset_on_alarm"] = d.reset_on_alarm;
  summary["steps"] = primary.path.size();
  summary["alarms"] = primary.alarms.size();
  summary["exceedance_fraction"] = exceedance(primary, m);
  if (secondary) {
    summary["down"] = {{"rho", down->rho},
                       {"threshold_m", *m_down},
                       {"alarms", secondary->alarms.size()},
                       {"exceedance_fraction", exceedance(*secondary, *m_down)}};
  }
  summary["scenario"] = to_string(o.scenario);
  summary["affected_dates"] = affected;
  out.write_json("detect.json", summary);

  out.report.summary = std::to_string(alarms.size()) + " alarm(s) at m = " + format_double(m);
  return out.finish("detect", {{"model", o.model.string()},
                               {"series", optional_path(o.series)},
                               {"events", optional_path(o.events)},
                               {"detector", detector_json(d)},
                               {"scenario", to_string(o.scenario)}});
}

CommandReport cmd_evaluate(const EvaluateOptions& o) {
  OutputDir out(o.out);
  if (o.end < o.start) {
    throw Error(ErrorKind::Validation, "evaluation end precedes its start");
  }
  const DetectorOptions& d = o.detector;
  const IntensityModel model = load_for_detection(o.model, d);
  std::vector<Timestamp> grid = o.thetas;
  if (grid.empty()) {
    for (Date day = o.start; day <= o.end && grid.size() < 10; day += std::chrono::days{1}) {
      if (model.calendar().is_open(day)) {
        grid.push_back(Timestamp::slot_start(day, 0));
        grid.push_back(Timestamp::slot_start(day, 10));
      }
    }
  }
  const double m = resolve_threshold(model, d.rho, d, o.start, out);
  const DetectorConfig config = make_config(d.rho, m, d);
  const auto report =
      worst_case_delay(model, d.rho, grid, config, {o.start, o.end}, o.replications, o.seed);

  ordered_json rows = ordered_json::array();
  std::string table =
      "theta,mean_delay_events,standard_error,detect_probability,max_delay_events,"
      "mean_delay_slots,detections,false_alarms\n";
  for (const auto& e : report.per_theta) {
    rows.push_back({{"theta", format_timestamp(e.theta)},
                    {"mean_delay_events", e.mean_delay_events},
                    {"standard_error", e.standard_error},
                    {"detect_probability", e.detect_probability},
                    {"max_delay_events", e.max_delay_events},
                    {"mean_delay_slots", e.mean_delay_slots},
                    {"detections", e.detections},
                    {"false_alarms", e.false_alarms},
                    {"flagged", e.flagged}});
    table += format_timestamp(e.theta) + "," + format_double(e.mean_delay_events) + "," +
             format_double(e.standard_error) + "," + format_double(e.detect_probability) + "," +
             format_double(e.max_delay_events) + "," + format_double(e.mean_delay_slots) + "," +
             std::to_string(e.detections) + "," + std::to_string(e.false_alarms) + "\n";
    if (e.flagged) {
      out.warn("no detection within the horizon for theta = " + format_timestamp(e.theta));
    }
  }
  ordered_json doc;
  doc["schema_version"] = kOutputSchemaVersion;
  doc["rho"] = d.rho;
  doc["threshold_m"] = m;
  doc["mode"] = to_string(config.mode);
  doc["replications"] = o.replications;
  doc["seed"] = o.seed;
  doc["worst_case_delay_events"] = report.worst_case_delay_events;
  doc["worst_case_max_delay_events"] = report.worst_case_max_delay_events;
  doc["false_alarm_rate_per_year"] = report.false_alarm_rate;
  doc["exceedance_fraction"] = report.exceedance_fraction;
  doc["per_theta"] = rows;
  out.write_json("delay_report.json", doc);
  out.write("delay_by_theta.csv", table);

  out.report.summary = "worst-case mean delay " + format_double(report.worst_case_delay_events) +
                       " events";
  ordered_json thetas = ordered_json::array();
  for (const auto t : o.thetas) {
    thetas.push_back(format_timestamp(t));
  }
  return out.finish("evaluate", {{"model", o.model.string()},
                                 {"detector", detector_json(d)},
                                 {"start", format_date(o.start)},
                                 {"end", format_date(o.end)},
                                 {"thetas", thetas},
                                 {"replications", o.replications},
                                 {"seed", o.seed}});
}

CommandReport cmd_scenario(const ScenarioOptions& o) {
  OutputDir out(o.out);
  const auto series = parse_slot_csv(o.series);
  if (series.empty()) {
    throw Error(ErrorKind::Validation, "slot series is empty");
  }
  SlotProfile profile;
  if (o.model) {
    profile = load_model(*o.model).profile();
  } else {
    profile = fit_slot_profile(series, Calendar(series.front().date, {}));
  }
  const ScenarioResult result = apply_scenario(series, {o.kind}, profile);
  out.write("slots.csv", to_text([&](std::ostream& os) { write_slot_csv(os, result.slots); }));
  ordered_json affected = ordered_json::array();
  for (const auto d : result.affected) {
    affected.push_back(format_date(d));
  }
  out.write_json("scenario.json", {{"schema_version", kOutputSchemaVersion},
                                   {"scenario", to_string(o.kind)},
                                   {"period_weeks", ScenarioTransform{}.period_weeks},
                                   {"boundary", format_slot_time(ScenarioTransform{}.boundary_slot)},
                                   {"anchor", optional_date(result.anchor)},
                                   {"affected_dates", affected}});
  out.report.summary = std::to_string(result.affected.size()) + " day(s) transformed";
  return out.finish("scenario", {{"series", o.series.string()},
                                 {"model", optional_path(o.model)},
                                 {"scenario", to_string(o.kind)}});
}

} // namespace scusum
