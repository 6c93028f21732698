#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fluxsim {

// Every data-parallel kernel in the library exists in two variants: the
// OpenMP one used by default and a serial reference used for testing.
// Both write per-index results into preallocated slots and reduce in fixed
// index order afterwards, so the two variants are bit-identical.
enum class ExecPolicy { Serial, OpenMP };

inline ExecPolicy default_policy() {
#ifdef _OPENMP
  return ExecPolicy::OpenMP;
#else
  return ExecPolicy::Serial;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// body(i) must only touch state owned by index i.
template <class F>
void parallel_for(std::size_t n, ExecPolicy policy, F&& body) {
  if (policy == ExecPolicy::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace fluxsim
