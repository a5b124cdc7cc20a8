#pragma once

#include <cstddef>
#include <cstdlib>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ottoforge::par {

enum class Mode { Serial, Parallel };

inline int& thread_cap() {
  static int cap = [] {
    if (const char* env = std::getenv("OTTOFORGE_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 0;  // 0 = no cap
  }();
  return cap;
}

inline void set_max_threads(int n) { thread_cap() = n; }

inline int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  int cap = thread_cap();
  if (cap > 0 && cap < n) n = cap;
  return n;
}

/// Evaluate f(i) for i in [0, n). Each task writes only into its own output
/// slot, so the merged result is identical in serial and parallel mode and
/// independent of the thread count.
template <class F>
void for_each_index(std::size_t n, F&& f, Mode mode = Mode::Parallel) {
#ifdef _OPENMP
  if (mode == Mode::Parallel && max_threads() > 1 && n > 1) {
    const int nt = max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      f(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  (void)mode;
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace ottoforge::par
