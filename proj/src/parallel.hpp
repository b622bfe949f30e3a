#pragma once

// Thin OpenMP wrapper. Every parallel loop in this project writes to
// per-index slots and leaves any floating-point reduction to a serial,
// index-ordered fold in the caller, which keeps results independent of the
// thread count.

#ifdef _OPENMP
#include <omp.h>
#endif

namespace minent::detail {

template <typename Body>
void parallel_for(int count, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < count; ++i) body(i);
#else
    for (int i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace minent::detail
