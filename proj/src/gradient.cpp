#include "minent/gradient.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "enumerate.hpp"
#include "minent/inference.hpp"
#include "minent/simulator.hpp"
#include "parallel.hpp"

namespace minent {

namespace {

struct EnumPartial {
    double entropy = 0.0;
    Eigen::VectorXd grad;
};

EnumPartial enumerate_gradient_subtree(const Hmm& hmm, const FiniteStatePolicy& policy,
                                       int horizon, int first_action, int first_obs) {
    EnumPartial partial;
    partial.grad = Eigen::VectorXd::Zero(policy.num_parameters());
    auto visit = [&](const detail::EnumeratedRecord& leaf) {
        partial.entropy += leaf.prob * leaf.entropy_bits;
        double weight = leaf.prob * leaf.entropy_bits;
        if (weight != 0.0) {
            for (const auto& [q, a] : leaf.qa_path) {
                policy.accumulate_score(q, a, weight, partial.grad);
            }
        }
    };
    detail::RecordEnumerator<decltype(visit)> walker(hmm, policy, horizon, visit);
    if (first_action < 0) {
        walker.run_all();
    } else {
        walker.run_prefix(first_action, first_obs);
    }
    return partial;
}

}  // namespace

GradientEstimate exact_gradient(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                                const EnumerationOptions& options) {
    require_compatible(hmm, policy);
    detail::check_enumeration_budget(hmm, horizon, options.budget);

    GradientEstimate estimate;
    estimate.sample_count = 0;
    if (options.exec == ExecMode::serial) {
        EnumPartial all = enumerate_gradient_subtree(hmm, policy, horizon, -1, -1);
        estimate.vector = std::move(all.grad);
        estimate.entropy_estimate = all.entropy;
        return estimate;
    }

    const int num_tasks = hmm.num_actions() * hmm.num_observations();
    std::vector<EnumPartial> partials(num_tasks);
    detail::parallel_for(num_tasks, [&](int task) {
        partials[task] = enumerate_gradient_subtree(hmm, policy, horizon,
                                                    task / hmm.num_observations(),
                                                    task % hmm.num_observations());
    });
    estimate.vector = Eigen::VectorXd::Zero(policy.num_parameters());
    estimate.entropy_estimate = 0.0;
    for (const EnumPartial& p : partials) {
        estimate.vector += p.grad;
        estimate.entropy_estimate += p.entropy;
    }
    return estimate;
}

GradientEstimate sampled_gradient(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                                  int count, std::uint64_t seed,
                                  const SampledGradientOptions& options) {
    require_compatible(hmm, policy);
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");

    // Parallel phase: per-episode entropies into index slots. The episodes
    // are exactly sample_batch(seed)'s, so the whole estimate is a pure
    // function of (theta, horizon, count, seed).
    std::vector<ObservationRecord> records(count);
    std::vector<double> entropies(count);
    auto sample_one = [&](int k) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(k));
        Trajectory traj = sample_trajectory(hmm, policy, horizon, rng);
        entropies[k] = entropy_given_observation(posterior(hmm, policy, traj.record));
        records[k] = std::move(traj.record);
    };
    if (options.exec == ExecMode::serial) {
        for (int k = 0; k < count; ++k) sample_one(k);
    } else {
        detail::parallel_for(count, sample_one);
    }

    double mean_entropy = 0.0;
    for (int k = 0; k < count; ++k) mean_entropy += entropies[k];
    mean_entropy /= count;
    const double baseline = options.mean_entropy_baseline ? mean_entropy : 0.0;

    // Serial index-ordered fold of the weighted scores.
    const int dim = policy.num_parameters();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd contribution(dim);
    for (int k = 0; k < count; ++k) {
        contribution.setZero();
        int q = policy.initial_memory_state();
        for (std::size_t t = 0; t < records[k].actions.size(); ++t) {
            policy.accumulate_score(q, records[k].actions[t], entropies[k] - baseline,
                                    contribution);
            q = policy.memory_update(q, records[k].observations[t]);
        }
        sum += contribution;
        sum_sq += contribution.cwiseProduct(contribution);
    }

    GradientEstimate estimate;
    estimate.vector = sum / count;
    estimate.sample_count = count;
    estimate.entropy_estimate = mean_entropy;
    estimate.stderr_vector =
        ((sum_sq / count - estimate.vector.cwiseProduct(estimate.vector)).cwiseMax(0.0) /
         count)
            .cwiseSqrt();
    return estimate;
}

Eigen::VectorXd finite_difference_gradient(const Hmm& hmm, const FiniteStatePolicy& policy,
                                           int horizon, double epsilon,
                                           const EnumerationOptions& options) {
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
    require_compatible(hmm, policy);
    detail::check_enumeration_budget(hmm, horizon, options.budget);

    FiniteStatePolicy probe = policy;
    Eigen::VectorXd theta = policy.theta_flat();
    Eigen::VectorXd grad(policy.num_parameters());
    for (int i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd shifted = theta;
        shifted(i) = theta(i) + epsilon;
        probe.set_theta_flat(shifted);
        double up = exact_conditional_entropy(hmm, probe, horizon, options);
        shifted(i) = theta(i) - epsilon;
        probe.set_theta_flat(shifted);
        double down = exact_conditional_entropy(hmm, probe, horizon, options);
        grad(i) = (up - down) / (2.0 * epsilon);
    }
    return grad;
}

}  // namespace minent
