#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "minent/exec.hpp"
#include "minent/gradient.hpp"
#include "minent/hmm.hpp"
#include "minent/policy.hpp"

namespace minent {

enum class GradientMode { sampled, exact };

struct TrainConfig {
    int horizon = 10;
    int samples_per_iter = 2000;
    int iterations = 2000;
    double step_size = 0.5;
    std::uint64_t seed = 0;
    GradientMode mode = GradientMode::sampled;
    int log_every = 1;

    /// Stop once the gradient infinity norm drops below grad_norm_tol.
    bool early_stop = false;
    double grad_norm_tol = 1e-8;

    /// When > 0, entropy is logged from a separate evaluation batch of this
    /// size instead of the gradient batch.
    int eval_samples = 0;

    bool mean_entropy_baseline = false;
    std::int64_t budget = 10'000'000;
    ExecMode exec = ExecMode::parallel;
};

struct TrainLogEntry {
    int iteration;
    double entropy_bits;
    double grad_inf_norm;
    double seconds;  // wall time since training started; not reproducible
};

struct TrainLog {
    std::vector<TrainLogEntry> entries;

    /// CSV with header "iteration,entropy_bits,grad_inf_norm,seconds".
    void write_csv(std::ostream& out) const;
};

struct TrainResult {
    FiniteStatePolicy policy;
    TrainLog log;
    bool stopped_early = false;
    int iterations_run = 0;
};

/// Fixed-step gradient descent on the conditional entropy. Iteration tau
/// draws its batch from the derived seed (config.seed, tau), so the whole
/// run is a pure function of the config and initial policy. A non-finite
/// gradient aborts with TrainAbortError naming the iteration and batch
/// seed; the log collected so far is recoverable via the `observer`
/// callback (called after every iteration when set).
TrainResult train(const Hmm& hmm, const FiniteStatePolicy& initial_policy,
                  const TrainConfig& config,
                  const std::function<void(const TrainLogEntry&)>& observer = {});

struct RandomSearchOptions {
    GradientMode eval_mode = GradientMode::sampled;
    int eval_samples = 2000;
    std::int64_t budget = 10'000'000;
    ExecMode exec = ExecMode::parallel;
};

struct RandomSearchResult {
    FiniteStatePolicy policy;
    double entropy_bits = 0.0;
};

/// Best of `trials` policies with theta drawn i.i.d. standard normal per
/// coordinate, scored by estimated conditional entropy. Trial i depends
/// only on (seed, i), so best-of-k results nest over trial prefixes.
RandomSearchResult random_policy_search(const Hmm& hmm, int memory_length, int horizon,
                                        int trials, std::uint64_t seed,
                                        const RandomSearchOptions& options = {});

}  // namespace minent
