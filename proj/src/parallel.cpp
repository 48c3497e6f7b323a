#include "alpha_procrustes/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace alpha_procrustes::parallel {

namespace {
std::atomic<int> g_override{0};

int env_cap() {
  const char* raw = std::getenv("ALPHA_PROC_THREADS");
  if (raw == nullptr) return 0;
  int value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc() || ptr != end || value <= 0) return 0;
  return value;
}
}  // namespace

int max_threads() {
  int cap = omp_get_max_threads();
  if (const int env = env_cap(); env > 0 && env < cap) cap = env;
  if (const int forced = g_override.load(); forced > 0) cap = forced;
  return cap;
}

void set_max_threads(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace alpha_procrustes::parallel
