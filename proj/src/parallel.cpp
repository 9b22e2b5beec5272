#include "subopt/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subopt {
namespace {

int resolve_default_cap() {
  if (const char* env = std::getenv("SUBOPT_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::atomic<int>& cap_slot() {
  static std::atomic<int> cap{resolve_default_cap()};
  return cap;
}

std::atomic<bool>& enabled_slot() {
  static std::atomic<bool> enabled{true};
  return enabled;
}

}  // namespace

int thread_cap() { return cap_slot().load(std::memory_order_relaxed); }

void set_thread_cap(int threads) {
  cap_slot().store(threads < 1 ? 1 : threads, std::memory_order_relaxed);
}

bool parallel_enabled() { return enabled_slot().load(std::memory_order_relaxed); }

void set_parallel_enabled(bool enabled) {
  enabled_slot().store(enabled, std::memory_order_relaxed);
}

namespace detail {

void run_indexed_serial(std::int64_t count, void* ctx, void (*body)(void*, std::int64_t)) {
  for (std::int64_t i = 0; i < count; ++i) body(ctx, i);
}

void run_indexed(std::int64_t count, void* ctx, void (*body)(void*, std::int64_t)) {
  const int threads = thread_cap();
  if (!parallel_enabled() || threads <= 1 || count < 2) {
    run_indexed_serial(count, ctx, body);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) body(ctx, i);
#else
  run_indexed_serial(count, ctx, body);
#endif
}

}  // namespace detail
}  // namespace subopt
