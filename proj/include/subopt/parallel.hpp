#pragma once

#include <cstdint>
#include <type_traits>

namespace subopt {

// Thread cap for batch kernels. Resolved once from SUBOPT_THREADS (if set),
// otherwise the OpenMP default; can be overridden programmatically.
int thread_cap();
void set_thread_cap(int threads);

// When disabled, every kernel runs the serial reference path. Results are
// bit-identical either way; the switch exists for testing and benchmarking.
bool parallel_enabled();
void set_parallel_enabled(bool enabled);

namespace detail {
void run_indexed(std::int64_t count, void* ctx, void (*body)(void*, std::int64_t));
void run_indexed_serial(std::int64_t count, void* ctx, void (*body)(void*, std::int64_t));
}  // namespace detail

// OpenMP kernel over [0, count). Iterations must be independent and must not
// throw; each writes only its own output slot.
template <class Fn>
void parallel_for(std::int64_t count, Fn&& fn) {
  using F = std::remove_reference_t<Fn>;
  detail::run_indexed(count, &fn, [](void* ctx, std::int64_t i) { (*static_cast<F*>(ctx))(i); });
}

// Serial reference for the kernel above.
template <class Fn>
void serial_for(std::int64_t count, Fn&& fn) {
  using F = std::remove_reference_t<Fn>;
  detail::run_indexed_serial(count, &fn,
                             [](void* ctx, std::int64_t i) { (*static_cast<F*>(ctx))(i); });
}

}  // namespace subopt
