#pragma once

#include <cstdint>

namespace minent {

/// Kernel execution mode. `parallel` uses OpenMP with a fixed work
/// partition and index-ordered reductions, so its output does not depend
/// on the thread count. `serial` is the plain reference loop kept for
/// testing and benchmarking.
enum class ExecMode { serial, parallel };

struct EnumerationOptions {
    std::int64_t budget = 10'000'000;  // max number of records to visit
    ExecMode exec = ExecMode::parallel;
};

}  // namespace minent
