#include "scusum/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace scusum {

namespace {

std::atomic<int> g_override{0};

int from_environment() {
  const char* raw = std::getenv("SEASONAL_CUSUM_THREADS");
  if (raw == nullptr || *raw == '\0') {
    return 0;
  }
  try {
    return std::max(0, std::stoi(raw));
  } catch (const std::exception&) {
    return 0;
  }
}

} // namespace

int max_threads() {
  if (const int n = g_override.load(); n > 0) {
    return n;
  }
  if (const int n = from_environment(); n > 0) {
    return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void set_max_threads(int n) { g_override.store(std::max(0, n)); }

} // namespace scusum
