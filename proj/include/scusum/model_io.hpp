#pragma once

#include "scusum/intensity.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace scusum {

inline constexpr int kModelSchemaVersion = 1;

// JSON document with schema_version, calendar (origin, holidays), the GLM or
// constant rate, the naive baseline rate, the slot profile and overrides.
std::string model_to_json(const IntensityModel& model);
IntensityModel model_from_json(std::string_view text);

void save_model(const IntensityModel& model, const std::filesystem::path& path);
IntensityModel load_model(const std::filesystem::path& path);

} // namespace scusum
