#pragma once

#include "scusum/calendar.hpp"
#include "scusum/intensity.hpp"
#include "scusum/simulate.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace testing {

using namespace scusum;

inline Date d(int y, unsigned m, unsigned day) { return make_date(y, m, day); }

inline std::set<Date> holidays() {
  return {d(2015, 1, 1),  d(2015, 4, 3),  d(2015, 4, 6),  d(2015, 5, 14), d(2015, 5, 25),
          d(2015, 12, 25), d(2016, 1, 1), d(2016, 3, 25), d(2016, 3, 28), d(2016, 5, 5),
          d(2016, 5, 16), d(2016, 12, 26), d(2017, 4, 14), d(2017, 4, 17), d(2017, 5, 25),
          d(2017, 6, 5),  d(2017, 12, 25), d(2017, 12, 26), d(2018, 1, 1), d(2018, 3, 30),
          d(2018, 4, 2),  d(2018, 5, 10), d(2018, 5, 21), d(2018, 12, 25)};
}

inline Calendar calendar() { return Calendar(d(2015, 1, 1), holidays()); }

// Synthetic seasonal model with a naive baseline equal to its mean open-slot
// rate over the first year.
inline IntensityModel seasonal_model(double monday_volume = 500.0) {
  IntensityModel model =
      IntensityModel::seasonal(synthetic_glm(monday_volume), synthetic_profile(), calendar());
  const RateTable year = model.rate_table(d(2015, 1, 1), d(2015, 12, 31));
  model.set_baseline_rate(year.total() / static_cast<double>(year.cells().size()));
  return model;
}

inline RateTable constant_rates(double lambda, Date first, Date last) {
  return IntensityModel::constant(lambda, Calendar(d(2015, 1, 1), {})).rate_table(first, last);
}

class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("scusum-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace testing
