#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "minent/exec.hpp"
#include "minent/hmm.hpp"
#include "minent/policy.hpp"

namespace minent {

/// A gradient of the conditional entropy objective (bits) in the policy's
/// flattened parameter space, together with the entropy value the same
/// computation produced. sample_count is 0 for exact gradients; for
/// sampled ones, stderr_vector holds the componentwise standard error.
struct GradientEstimate {
    Eigen::VectorXd vector;
    std::int64_t sample_count = 0;
    double entropy_estimate = 0.0;
    Eigen::VectorXd stderr_vector;
};

/// Full-enumeration gradient: sum over records of P(y) H(S_0|Y=y) score(y).
/// Subject to the same enumeration budget as exact_conditional_entropy.
GradientEstimate exact_gradient(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                                const EnumerationOptions& options = {});

struct SampledGradientOptions {
    /// Subtract the batch-mean entropy from each sample's weight. Leaves
    /// the estimator unbiased (the score has mean zero) and can reduce
    /// variance; off by default to match the raw estimator.
    bool mean_entropy_baseline = false;
    ExecMode exec = ExecMode::parallel;
};

/// Monte-Carlo estimator of exact_gradient from M sampled episodes:
/// (1/M) sum_k H(S_0|Y=y_k) score(y_k). Episode k comes from the substream
/// (seed, k), so the estimate is a pure function of its arguments.
GradientEstimate sampled_gradient(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                                  int count, std::uint64_t seed,
                                  const SampledGradientOptions& options = {});

/// Central finite differences of exact_conditional_entropy, coordinate by
/// coordinate. Verification oracle for the analytic gradient.
Eigen::VectorXd finite_difference_gradient(const Hmm& hmm, const FiniteStatePolicy& policy,
                                           int horizon, double epsilon,
                                           const EnumerationOptions& options = {});

}  // namespace minent
