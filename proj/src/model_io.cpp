#include "scusum/model_io.hpp"

#include "scusum/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace scusum {

namespace {

using nlohmann::json;

json factors_json(const FactorSpec& s) {
  return {{"weekday_flag", s.weekday_flag},
          {"trend", s.trend},
          {"month", s.month},
          {"day_of_week", s.day_of_week},
          {"day_after_holiday", s.day_after_holiday}};
}

FactorSpec factors_from(const json& j) {
  FactorSpec s;
  s.weekday_flag = j.at("weekday_flag").get<bool>();
  s.trend = j.at("trend").get<bool>();
  s.month = j.at("month").get<bool>();
  s.day_of_week = j.at("day_of_week").get<bool>();
  s.day_after_holiday = j.at("day_after_holiday").get<bool>();
  return s;
}

template <std::size_t N>
std::array<double, N> fixed_array(const json& j, const char* what) {
  const auto values = j.get<std::vector<double>>();
  if (values.size() != N) {
    throw Error(ErrorKind::Validation, std::string(what) + " must have " + std::to_string(N) +
                                           " entries");
  }
  std::array<double, N> out{};
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}

} // namespace

std::string model_to_json(const IntensityModel& model) {
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["origin"] = format_date(model.calendar().origin());
  json holidays = json::array();
  for (const auto d : model.calendar().holidays()) {
    holidays.push_back(format_date(d));
  }
  doc["holidays"] = holidays;
  if (const auto& glm = model.glm()) {
    doc["glm"] = {{"factors", factors_json(glm->spec)},
                  {"columns", glm->spec.column_names()},
                  {"coefficients", glm->coefficients},
                  {"log_likelihood", glm->log_likelihood},
                  {"deviance", glm->deviance},
                  {"bic", glm->bic},
                  {"n_obs", glm->n_obs},
                  {"iterations", glm->iterations},
                  {"score_max_norm", glm->score_max_norm}};
    doc["constant_rate"] = nullptr;
  } else {
    doc["glm"] = nullptr;
    doc["constant_rate"] = model.constant_rate();
  }
  doc["baseline_rate"] = model.baseline_rate() ? json(*model.baseline_rate()) : json(nullptr);
  doc["profile"] = {{"weekday", model.profile().weekday}, {"saturday", model.profile().saturday}};
  json overrides = json::array();
  for (const auto& o : model.overrides()) {
    overrides.push_back({{"anchor", format_date(o.anchor)},
                         {"period_days", o.period_days},
                         {"weekday", o.weekday}});
  }
  doc["overrides"] = overrides;
  return doc.dump(2) + "\n";
}

IntensityModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw Error(ErrorKind::Validation,
                  "unsupported model schema_version " + std::to_string(version));
    }
    std::set<Date> holidays;
    for (const auto& h : doc.at("holidays")) {
      holidays.insert(parse_date(h.get<std::string>()));
    }
    Calendar calendar(parse_date(doc.at("origin").get<std::string>()), std::move(holidays));

    SlotProfile profile;
    const auto& p = doc.at("profile");
    profile.weekday = fixed_array<kWeekdaySlots>(p.at("weekday"), "profile.weekday");
    profile.saturday = fixed_array<kSaturdaySlots>(p.at("saturday"), "profile.saturday");

    IntensityModel model;
    if (const auto& g = doc.at("glm"); !g.is_null()) {
      GlmModel glm;
      glm.spec = factors_from(g.at("factors"));
      glm.coefficients = g.at("coefficients").get<std::vector<double>>();
      if (glm.coefficients.size() != glm.spec.columns()) {
        throw Error(ErrorKind::Validation, "glm.coefficients does not match glm.factors");
      }
      glm.log_likelihood = g.at("log_likelihood").get<double>();
      glm.deviance = g.at("deviance").get<double>();
      glm.bic = g.at("bic").get<double>();
      glm.n_obs = g.at("n_obs").get<std::size_t>();
      glm.iterations = g.at("iterations").get<int>();
      glm.score_max_norm = g.at("score_max_norm").get<double>();
      model = IntensityModel::seasonal(std::move(glm), profile, std::move(calendar));
    } else {
      model = IntensityModel::constant(doc.at("constant_rate").get<double>(), std::move(calendar));
    }
    if (const auto& b = doc.at("baseline_rate"); !b.is_null()) {
      model.set_baseline_rate(b.get<double>());
    }
    for (const auto& o : doc.at("overrides")) {
      model.add_override({parse_date(o.at("anchor").get<std::string>()),
                          o.at("period_days").get<int>(),
                          fixed_array<kWeekdaySlots>(o.at("weekday"), "override.weekday")});
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const IntensityModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  }
  out << model_to_json(model);
}

IntensityModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

} // namespace scusum
