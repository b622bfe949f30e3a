#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace minent {

/// Thrown when an exact (enumeration-based) operation would need to visit
/// more records than the configured budget allows.
class BudgetError : public std::runtime_error {
public:
    BudgetError(double required, std::int64_t budget)
        : std::runtime_error("enumeration over " + format_count(required) +
                             " records exceeds the budget of " + std::to_string(budget)),
          required_(required),
          budget_(budget) {}

    double required() const { return required_; }
    std::int64_t budget() const { return budget_; }

private:
    static std::string format_count(double c) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.0f", c);
        return buf;
    }

    double required_;
    std::int64_t budget_;
};

/// Thrown when a posterior is requested for a record with probability zero.
class ImpossibleObservationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a training step produces a non-finite gradient. Carries
/// enough context to reproduce the offending batch.
class TrainAbortError : public std::runtime_error {
public:
    TrainAbortError(const std::string& what, int iteration, std::uint64_t batch_seed)
        : std::runtime_error(what), iteration_(iteration), batch_seed_(batch_seed) {}

    int iteration() const { return iteration_; }
    std::uint64_t batch_seed() const { return batch_seed_; }

private:
    int iteration_;
    std::uint64_t batch_seed_;
};

}  // namespace minent
