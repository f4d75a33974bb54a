#include "scusum/scusum.h"

#include "scusum/detect.hpp"
#include "scusum/error.hpp"
#include "scusum/model_io.hpp"
#include "scusum/parallel.hpp"
#include "scusum/pipeline.hpp"

#include <new>
#include <string>

struct scusum_model {
  scusum::IntensityModel model;
};

struct scusum_detector {
  scusum::CusumDetector detector;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_report;

template <class F>
int guarded(F&& body) {
  g_error.clear();
  try {
    body();
    return SCUSUM_OK;
  } catch (const scusum::Error& e) {
    g_error = std::string(scusum::to_string(e.kind())) + ": " + e.what();
    return scusum::is_numeric_failure(e.kind()) ? SCUSUM_ERROR_NUMERIC : SCUSUM_ERROR_INPUT;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
  } catch (const std::exception& e) {
    g_error = e.what();
  } catch (...) {
    g_error = "unknown error";
  }
  return SCUSUM_ERROR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) {
    throw scusum::Error(scusum::ErrorKind::Validation, std::string(what) + " is required");
  }
}

std::string text(const char* s, const char* what) {
  require(s, what);
  return s;
}

std::optional<scusum::Path> maybe_path(const char* s) {
  return s ? std::optional<scusum::Path>(s) : std::nullopt;
}

std::optional<scusum::Date> maybe_date(const char* s) {
  return s ? std::optional<scusum::Date>(scusum::parse_date(s)) : std::nullopt;
}

scusum::ObservationMode mode_of(int mode) {
  switch (mode) {
  case SCUSUM_MODE_AGGREGATED:
    return scusum::ObservationMode::AggregatedCounts;
  case SCUSUM_MODE_EVENTS:
    return scusum::ObservationMode::EventTimes;
  default:
    throw scusum::Error(scusum::ErrorKind::Validation, "unknown observation mode");
  }
}

scusum::ScenarioKind scenario_of(int kind) {
  switch (kind) {
  case SCUSUM_SCENARIO_IDENTITY:
    return scusum::ScenarioKind::Identity;
  case SCUSUM_SCENARIO_POSTPONE_THIRD_TUESDAY:
    return scusum::ScenarioKind::PostponeThirdTuesdayMorning;
  default:
    throw scusum::Error(scusum::ErrorKind::Validation, "unknown scenario kind");
  }
}

scusum::DetectorOptions detector_of(const scusum_detector_options& c) {
  scusum::DetectorOptions d;
  d.rho = c.rho;
  if (c.has_m) {
    d.m = c.m;
  }
  if (c.has_pi) {
    d.pi = c.pi;
  }
  d.mode = mode_of(c.mode);
  d.reset_on_alarm = c.reset_on_alarm != 0;
  d.naive_lambda = c.naive_lambda != 0;
  d.double_sided = c.double_sided != 0;
  if (c.rho_down > 0.0) {
    d.rho_down = c.rho_down;
  }
  d.replications = c.replications;
  d.horizon_days = c.horizon_days;
  d.tolerance_rel = c.tolerance_rel;
  d.seed = c.seed;
  return d;
}

void remember(const scusum::CommandReport& report) {
  g_report = report.summary;
  for (const auto& w : report.warnings) {
    g_report += "\nwarning: " + w;
  }
}

} // namespace

extern "C" {

const char* scusum_version(void) { return scusum::kToolVersion; }

const char* scusum_last_error(void) { return g_error.c_str(); }

const char* scusum_last_report(void) { return g_report.c_str(); }

void scusum_set_max_threads(int n) { scusum::set_max_threads(n); }

int scusum_beta(double rho, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = scusum::beta(rho);
  });
}

int scusum_model_load(const char* path, scusum_model** out) {
  return guarded([&] {
    require(out, "out");
    *out = new scusum_model{scusum::load_model(text(path, "path"))};
  });
}

int scusum_model_save(const scusum_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    scusum::save_model(model->model, text(path, "path"));
  });
}

void scusum_model_free(scusum_model* model) { delete model; }

int scusum_model_naive(const scusum_model* model, scusum_model** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = new scusum_model{model->model.naive_baseline()};
  });
}

int scusum_model_slot_intensity(const scusum_model* model, const char* date, int slot,
                                double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.slot_intensity(scusum::parse_date(text(date, "date")), slot);
  });
}

int scusum_model_cumulative_intensity(const scusum_model* model, const char* from, const char* to,
                                      double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.cumulative_intensity(scusum::parse_timestamp(text(from, "from")),
                                             scusum::parse_timestamp(text(to, "to")));
  });
}

void scusum_detector_config_init(scusum_detector_config* config) {
  if (config) {
    *config = {1.2, 1.0, 1};
  }
}

int scusum_detector_create(const scusum_detector_config* config, scusum_detector** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    scusum::DetectorConfig c;
    c.rho = config->rho;
    c.threshold = config->threshold;
    c.direction = config->rho > 1.0 ? scusum::Direction::Increase : scusum::Direction::Decrease;
    c.reset_on_alarm = config->reset_on_alarm != 0;
    *out = new scusum_detector{scusum::CusumDetector(c)};
  });
}

void scusum_detector_free(scusum_detector* detector) { delete detector; }

int scusum_detector_step(scusum_detector* detector, int64_t count, double lambda_increment,
                         int* alarm) {
  return guarded([&] {
    require(detector, "detector");
    const scusum::Timestamp end = detector->detector.state().clock;
    const bool raised = detector->detector.step(count, lambda_increment, end).has_value();
    if (alarm) {
      *alarm = raised ? 1 : 0;
    }
  });
}

int scusum_detector_state(const scusum_detector* detector, double* v, double* u,
                          int64_t* events_seen) {
  return guarded([&] {
    require(detector, "detector");
    const auto& s = detector->detector.state();
    if (v) {
      *v = s.v;
    }
    if (u) {
      *u = s.u;
    }
    if (events_seen) {
      *events_seen = s.events_seen;
    }
  });
}

void scusum_detector_options_init(scusum_detector_options* o) {
  if (!o) {
    return;
  }
  const scusum::DetectorOptions d;
  *o = {};
  o->rho = d.rho;
  o->mode = SCUSUM_MODE_AGGREGATED;
  o->reset_on_alarm = d.reset_on_alarm ? 1 : 0;
  o->replications = d.replications;
  o->horizon_days = d.horizon_days;
  o->tolerance_rel = d.tolerance_rel;
  o->seed = d.seed;
}

void scusum_fit_options_init(scusum_fit_options* o) {
  if (o) {
    *o = {};
  }
}

void scusum_calibrate_options_init(scusum_calibrate_options* o) {
  if (o) {
    *o = {};
    scusum_detector_options_init(&o->detector);
  }
}

void scusum_simulate_options_init(scusum_simulate_options* o) {
  if (o) {
    *o = {};
    o->seed = 1;
    o->rho = 1.0;
  }
}

void scusum_detect_options_init(scusum_detect_options* o) {
  if (o) {
    *o = {};
    scusum_detector_options_init(&o->detector);
  }
}

void scusum_evaluate_options_init(scusum_evaluate_options* o) {
  if (o) {
    *o = {};
    scusum_detector_options_init(&o->detector);
    o->replications = 500;
    o->seed = 1;
  }
}

void scusum_scenario_options_init(scusum_scenario_options* o) {
  if (o) {
    *o = {};
    o->scenario = SCUSUM_SCENARIO_POSTPONE_THIRD_TUESDAY;
  }
}

int scusum_run_fit(const scusum_fit_options* c) {
  g_report.clear();
  return guarded([&] {
    require(c, "options");
    scusum::FitOptions o;
    o.daily = text(c->daily, "daily");
    o.slots = maybe_path(c->slots);
    o.holidays = maybe_path(c->holidays);
    o.origin = maybe_date(c->origin);
    o.split_date = maybe_date(c->split_date);
    o.scenario = scenario_of(c->scenario);
    o.out = text(c->out, "out");
    remember(scusum::cmd_fit(o));
  });
}

int scusum_run_calibrate(const scusum_calibrate_options* c) {
  g_report.clear();
  return guarded([&] {
    require(c, "options");
    scusum::CalibrateOptions o;
    o.model = text(c->model, "model");
    o.detector = detector_of(c->detector);
    o.start = maybe_date(c->start);
    o.out = text(c->out, "out");
    remember(scusum::cmd_calibrate(o));
  });
}

int scusum_run_simulate(const scusum_simulate_options* c) {
  g_report.clear();
  return guarded([&] {
    require(c, "options");
    scusum::SimulateOptions o;
    o.model = text(c->model, "model");
    o.start = scusum::parse_date(text(c->start, "start"));
    o.end = scusum::parse_date(text(c->end, "end"));
    o.seed = c->seed;
    if (c->theta) {
      o.theta = scusum::parse_timestamp(c->theta);
    }
    o.rho = c->rho;
    o.events = c->events != 0;
    o.scenario = scenario_of(c->scenario);
    o.out = text(c->out, "out");
    remember(scusum::cmd_simulate(o));
  });
}

int scusum_run_detect(const scusum_detect_options* c) {
  g_report.clear();
  return guarded([&] {
    require(c, "options");
    scusum::DetectOptions o;
    o.model = text(c->model, "model");
    o.series = maybe_path(c->series);
    o.events = maybe_path(c->events);
    o.detector = detector_of(c->detector);
    o.scenario = scenario_of(c->scenario);
    o.out = text(c->out, "out");
    remember(scusum::cmd_detect(o));
  });
}

int scusum_run_evaluate(const scusum_evaluate_options* c) {
  g_report.clear();
  return guarded([&] {
    require(c, "options");
    scusum::EvaluateOptions o;
    o.model = text(c->model, "model");
    o.detector = detector_of(c->detector);
    o.start = scusum::parse_date(text(c->start, "start"));
    o.end = scusum::parse_date(text(c->end, "end"));
    for (size_t i = 0; i < c->n_thetas; ++i) {
      o.thetas.push_back(scusum::parse_timestamp(text(c->thetas[i], "theta")));
    }
    o.replications = c->replications;
    o.seed = c->seed;
    o.out = text(c->out, "out");
    remember(scusum::cmd_evaluate(o));
  });
}

int scusum_run_scenario(const scusum_scenario_options* c) {
  g_report.clear();
  return guarded([&] {
    require(c, "options");
    scusum::ScenarioOptions o;
    o.series = text(c->series, "series");
    o.model = maybe_path(c->model);
    o.kind = scenario_of(c->scenario);
    o.out = text(c->out, "out");
    remember(scusum::cmd_scenario(o));
  });
}

} // extern "C"
