// seasonal-cusum: command-line front end over the C interface.

#include "scusum/scusum.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

struct DetectorFlags {
  double rho = 1.2;
  std::optional<double> m;
  std::optional<double> pi;
  std::string mode = "aggregated";
  bool reset_on_alarm = true;
  bool naive_lambda = false;
  bool double_sided = false;
  std::optional<double> rho_down;
  int replications = 1000;
  int horizon_days = 365;
  double tolerance = 0.02;
  std::uint64_t seed = 1;
};

const std::map<std::string, int> kModes = {{"aggregated", SCUSUM_MODE_AGGREGATED},
                                           {"events", SCUSUM_MODE_EVENTS}};
const std::map<std::string, int> kScenarios = {
    {"identity", SCUSUM_SCENARIO_IDENTITY},
    {"postpone-third-tuesday", SCUSUM_SCENARIO_POSTPONE_THIRD_TUESDAY}};

void add_detector_flags(CLI::App* cmd, DetectorFlags& f, bool with_options,
                        const std::string& replications_flag) {
  cmd->add_option("--rho", f.rho, "Proportional change to detect (>1 increase, <1 decrease)")
      ->capture_default_str();
  cmd->add_option("--pi", f.pi, "False-alarm budget: expected events to a false alarm");
  cmd->add_option("--mode", f.mode, "Observation mode")
      ->check(CLI::IsMember({"aggregated", "events"}))
      ->capture_default_str();
  cmd->add_flag("--naive-lambda", f.naive_lambda, "Use the constant baseline rate");
  cmd->add_option(replications_flag, f.replications, "Calibration replications")
      ->capture_default_str();
  cmd->add_option("--horizon-days", f.horizon_days, "Calibration horizon in calendar days")
      ->capture_default_str();
  cmd->add_option("--tolerance", f.tolerance, "Relative calibration tolerance")
      ->capture_default_str();
  if (with_options) {
    cmd->add_option("--m", f.m, "Alarm threshold (instead of --pi)");
    cmd->add_flag("--reset-on-alarm,!--no-reset-on-alarm", f.reset_on_alarm,
                  "Restart V at zero after an alarm (default on)");
    cmd->add_flag("--double-sided", f.double_sided, "Run an increase and a decrease detector");
    cmd->add_option("--rho-down", f.rho_down, "Decrease factor of a double-sided run (default 1/rho)");
  }
}

scusum_detector_options to_c(const DetectorFlags& f) {
  scusum_detector_options o;
  scusum_detector_options_init(&o);
  o.rho = f.rho;
  o.has_m = f.m.has_value();
  o.m = f.m.value_or(0.0);
  o.has_pi = f.pi.has_value();
  o.pi = f.pi.value_or(0.0);
  o.mode = kModes.at(f.mode);
  o.reset_on_alarm = f.reset_on_alarm;
  o.naive_lambda = f.naive_lambda;
  o.double_sided = f.double_sided;
  o.rho_down = f.rho_down.value_or(0.0);
  o.replications = f.replications;
  o.horizon_days = f.horizon_days;
  o.tolerance_rel = f.tolerance;
  o.seed = f.seed;
  return o;
}

const char* c_str(const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; }

int finish(int status) {
  if (status != SCUSUM_OK) {
    std::fprintf(stderr, "error: %s\n", scusum_last_error());
    return status;
  }
  const char* report = scusum_last_report();
  const char* newline = std::strchr(report, '\n');
  if (newline == nullptr) {
    std::printf("%s\n", report);
  } else {
    std::printf("%.*s\n", static_cast<int>(newline - report), report);
    std::fprintf(stderr, "%s\n", newline + 1);
  }
  return SCUSUM_OK;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seasonal CUSUM change detection for call arrival counts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(scusum_version()));
  std::function<int()> action;

  // fit
  struct {
    std::string daily, out;
    std::optional<std::string> slots, holidays, origin, split_date;
    std::string scenario = "identity";
  } fit;
  auto* fit_cmd = app.add_subcommand("fit", "Select and fit the seasonal intensity model");
  fit_cmd->add_option("--daily", fit.daily, "Daily counts CSV (date,count)")->required();
  fit_cmd->add_option("--slots", fit.slots, "Half-hour counts CSV (date,slot_start,count)");
  fit_cmd->add_option("--holidays", fit.holidays, "Holiday dates, one per line");
  fit_cmd->add_option("--origin", fit.origin, "Trend origin date (default 2015-04-01)");
  fit_cmd->add_option("--split-date", fit.split_date, "First date of the held-out test period");
  fit_cmd->add_option("--scenario", fit.scenario, "Recurring pattern to encode in the profile")
      ->check(CLI::IsMember({"identity", "postpone-third-tuesday"}));
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();
  fit_cmd->callback([&] {
    action = [&] {
      scusum_fit_options o;
      scusum_fit_options_init(&o);
      o.daily = fit.daily.c_str();
      o.slots = c_str(fit.slots);
      o.holidays = c_str(fit.holidays);
      o.origin = c_str(fit.origin);
      o.split_date = c_str(fit.split_date);
      o.scenario = kScenarios.at(fit.scenario);
      o.out = fit.out.c_str();
      return scusum_run_fit(&o);
    };
  });

  // calibrate
  struct {
    std::string model, out;
    std::optional<std::string> start;
    DetectorFlags detector;
  } cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Choose the threshold m for a budget pi");
  cal_cmd->add_option("--model", cal.model, "Model JSON")->required();
  add_detector_flags(cal_cmd, cal.detector, false, "--replications");
  cal_cmd->add_option("--seed", cal.detector.seed, "Random seed")->capture_default_str();
  cal_cmd->add_option("--start", cal.start, "First day of the calibration horizon");
  cal_cmd->add_option("--out", cal.out, "Output directory")->required();
  cal_cmd->callback([&] {
    action = [&] {
      scusum_calibrate_options o;
      scusum_calibrate_options_init(&o);
      o.model = cal.model.c_str();
      o.detector = to_c(cal.detector);
      o.start = c_str(cal.start);
      o.out = cal.out.c_str();
      return scusum_run_calibrate(&o);
    };
  });

  // simulate
  struct {
    std::string model, start, end, out;
    std::uint64_t seed = 1;
    std::optional<std::string> theta;
    double rho = 1.0;
    bool events = false;
    std::string scenario = "identity";
  } sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate counts from a model");
  sim_cmd->add_option("--model", sim.model, "Model JSON")->required();
  sim_cmd->add_option("--start", sim.start, "First simulated day")->required();
  sim_cmd->add_option("--end", sim.end, "Last simulated day")->required();
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--theta", sim.theta, "Change time (none: no change)");
  sim_cmd->add_option("--rho", sim.rho, "Intensity factor from theta on")->capture_default_str();
  sim_cmd->add_flag("--events", sim.events, "Simulate exact event times as well");
  sim_cmd->add_option("--scenario", sim.scenario, "Transform applied to the slot counts")
      ->check(CLI::IsMember({"identity", "postpone-third-tuesday"}));
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->callback([&] {
    action = [&] {
      scusum_simulate_options o;
      scusum_simulate_options_init(&o);
      o.model = sim.model.c_str();
      o.start = sim.start.c_str();
      o.end = sim.end.c_str();
      o.seed = sim.seed;
      o.theta = c_str(sim.theta);
      o.rho = sim.rho;
      o.events = sim.events;
      o.scenario = kScenarios.at(sim.scenario);
      o.out = sim.out.c_str();
      return scusum_run_simulate(&o);
    };
  });

  // detect
  struct {
    std::string model, out;
    std::optional<std::string> series, events;
    DetectorFlags detector;
    std::string scenario = "identity";
  } det;
  auto* det_cmd = app.add_subcommand("detect", "Run the CUSUM detector over observed data");
  det_cmd->add_option("--model", det.model, "Model JSON")->required();
  det_cmd->add_option("--series", det.series, "Half-hour counts CSV");
  det_cmd->add_option("--events", det.events, "Event times CSV (timestamp)");
  add_detector_flags(det_cmd, det.detector, true, "--replications,--calibration-replications");
  det_cmd->add_option("--seed", det.detector.seed, "Calibration seed")->capture_default_str();
  det_cmd->add_option("--scenario", det.scenario, "Transform applied to the series first")
      ->check(CLI::IsMember({"identity", "postpone-third-tuesday"}));
  det_cmd->add_option("--out", det.out, "Output directory")->required();
  det_cmd->callback([&] {
    action = [&] {
      scusum_detect_options o;
      scusum_detect_options_init(&o);
      o.model = det.model.c_str();
      o.series = c_str(det.series);
      o.events = c_str(det.events);
      o.detector = to_c(det.detector);
      o.scenario = kScenarios.at(det.scenario);
      o.out = det.out.c_str();
      return scusum_run_detect(&o);
    };
  });

  // evaluate
  struct {
    std::string model, start, end, out;
    std::vector<std::string> thetas;
    int replications = 500;
    DetectorFlags detector;
  } ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Estimate detection delays by simulation");
  ev_cmd->add_option("--model", ev.model, "Model JSON")->required();
  ev_cmd->add_option("--start", ev.start, "First simulated day")->required();
  ev_cmd->add_option("--end", ev.end, "Last simulated day")->required();
  ev_cmd->add_option("--theta", ev.thetas, "Change time (repeatable)");
  ev_cmd->add_option("--replications", ev.replications, "Paths per change time")
      ->capture_default_str();
  add_detector_flags(ev_cmd, ev.detector, true, "--calibration-replications");
  ev_cmd->add_option("--seed", ev.detector.seed, "Random seed")->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "Output directory")->required();
  ev_cmd->callback([&] {
    action = [&] {
      std::vector<const char*> thetas;
      for (const auto& t : ev.thetas) {
        thetas.push_back(t.c_str());
      }
      scusum_evaluate_options o;
      scusum_evaluate_options_init(&o);
      o.model = ev.model.c_str();
      o.detector = to_c(ev.detector);
      o.start = ev.start.c_str();
      o.end = ev.end.c_str();
      o.thetas = thetas.data();
      o.n_thetas = thetas.size();
      o.replications = ev.replications;
      o.seed = ev.detector.seed;
      o.out = ev.out.c_str();
      return scusum_run_evaluate(&o);
    };
  });

  // scenario
  struct {
    std::string series, out;
    std::optional<std::string> model;
    std::string scenario = "postpone-third-tuesday";
  } scn;
  auto* scn_cmd = app.add_subcommand("scenario", "Apply a scenario transform to a slot series");
  scn_cmd->add_option("--series", scn.series, "Half-hour counts CSV")->required();
  scn_cmd->add_option("--model", scn.model, "Model JSON supplying the weekday profile");
  scn_cmd->add_option("--scenario", scn.scenario, "Transform")
      ->check(CLI::IsMember({"identity", "postpone-third-tuesday"}))
      ->capture_default_str();
  scn_cmd->add_option("--out", scn.out, "Output directory")->required();
  scn_cmd->callback([&] {
    action = [&] {
      scusum_scenario_options o;
      scusum_scenario_options_init(&o);
      o.series = scn.series.c_str();
      o.model = c_str(scn.model);
      o.scenario = kScenarios.at(scn.scenario);
      o.out = scn.out.c_str();
      return scusum_run_scenario(&o);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return SCUSUM_ERROR_INPUT;
  }
  return finish(action());
}
