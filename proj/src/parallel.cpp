#include "eisenlab/parallel.hpp"

#include <cstdlib>

namespace eisenlab {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads = n; }

int thread_count() {
  int n = g_threads;
  if (n > 0) return n;
  if (const char* env = std::getenv("EISENLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

}  // namespace eisenlab
