#include "minent/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "enumerate.hpp"
#include "minent/errors.hpp"
#include "parallel.hpp"

namespace minent {

namespace detail {

void check_record(const Hmm& hmm, const FiniteStatePolicy& policy,
                  const ObservationRecord& record) {
    require_compatible(hmm, policy);
    check_symbol_indices(hmm, record.observations, record.actions);
}

double entropy_bits_from_unnormalized(const Eigen::VectorXd& weights) {
    double total = weights.sum();
    double h = 0.0;
    for (int i = 0; i < weights.size(); ++i) {
        if (weights(i) > 0.0) {
            double p = weights(i) / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

double enumeration_size(const Hmm& hmm, int horizon) {
    return std::pow(static_cast<double>(hmm.num_observations()) * hmm.num_actions(),
                    horizon + 1);
}

void check_enumeration_budget(const Hmm& hmm, int horizon, std::int64_t budget) {
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    double required = enumeration_size(hmm, horizon);
    if (required > static_cast<double>(budget)) throw BudgetError(required, budget);
}

}  // namespace detail

double log_policy_prob(const FiniteStatePolicy& policy, const ObservationRecord& record) {
    if (record.observations.size() != record.actions.size() || record.observations.empty()) {
        throw std::invalid_argument("record must hold equal-length, non-empty sequences");
    }
    double log_prob = 0.0;
    int q = policy.initial_memory_state();
    for (std::size_t t = 0; t < record.actions.size(); ++t) {
        log_prob += std::log(policy.action_distribution(q)(record.actions[t]));
        q = policy.memory_update(q, record.observations[t]);
    }
    return log_prob;
}

double joint_log_prob(const Hmm& hmm, const FiniteStatePolicy& policy,
                      const ObservationRecord& record) {
    detail::check_record(hmm, policy, record);
    double log_lik = sequence_log_likelihood(hmm, record.observations, record.actions);
    if (!std::isfinite(log_lik)) return -std::numeric_limits<double>::infinity();
    return log_lik + log_policy_prob(policy, record);
}

double joint_log_prob_given_s0(const Hmm& hmm, const FiniteStatePolicy& policy,
                               const ObservationRecord& record, int s0) {
    detail::check_record(hmm, policy, record);
    bool in_support = false;
    for (int s : hmm.initial_support()) in_support |= (s == s0);
    if (!in_support) {
        throw std::domain_error("state " + std::to_string(s0) +
                                " is not in the initial support");
    }
    double log_lik = sequence_log_likelihood_from(hmm, s0, record.observations, record.actions);
    if (!std::isfinite(log_lik)) return -std::numeric_limits<double>::infinity();
    return log_lik + log_policy_prob(policy, record);
}

Posterior posterior(const Hmm& hmm, const FiniteStatePolicy& policy,
                    const ObservationRecord& record) {
    detail::check_record(hmm, policy, record);
    const std::vector<int>& support = hmm.initial_support();
    const int n = hmm.num_states();
    const int k = static_cast<int>(support.size());

    // One scaled forward pass per start state, carried jointly; the shared
    // scale factor cancels in the normalization, as does the policy factor.
    Eigen::MatrixXd forward = Eigen::MatrixXd::Zero(n, k);
    for (int c = 0; c < k; ++c) forward(support[c], c) = 1.0;
    for (std::size_t t = 0; t < record.observations.size(); ++t) {
        forward = forward.cwiseProduct(
            hmm.emissions(record.actions[t]).row(record.observations[t]).transpose()
                .replicate(1, k));
        forward = hmm.transition() * forward;
        double scale = forward.sum();
        if (scale <= 0.0) {
            throw ImpossibleObservationError(
                "record has probability zero under the model");
        }
        forward /= scale;
    }

    Eigen::VectorXd weights(k);
    for (int c = 0; c < k; ++c) weights(c) = hmm.mu0()(support[c]) * forward.col(c).sum();
    double total = weights.sum();
    if (total <= 0.0) {
        throw ImpossibleObservationError("record has probability zero under the model");
    }
    return Posterior{support, weights / total};
}

double entropy_given_observation(const Posterior& posterior) {
    return detail::entropy_bits_from_unnormalized(posterior.probs);
}

double exact_conditional_entropy(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                                 const EnumerationOptions& options) {
    require_compatible(hmm, policy);
    detail::check_enumeration_budget(hmm, horizon, options.budget);

    if (options.exec == ExecMode::serial) {
        double entropy = 0.0;
        auto visit = [&](const detail::EnumeratedRecord& leaf) {
            entropy += leaf.prob * leaf.entropy_bits;
        };
        detail::RecordEnumerator<decltype(visit)> walker(hmm, policy, horizon, visit);
        walker.run_all();
        return entropy;
    }

    // One task per first step (a0, o0) in the serial visit order; partials
    // are folded in task order, so the result is thread-count independent.
    const int num_tasks = hmm.num_actions() * hmm.num_observations();
    std::vector<double> partial(num_tasks, 0.0);
    detail::parallel_for(num_tasks, [&](int task) {
        double entropy = 0.0;
        auto visit = [&](const detail::EnumeratedRecord& leaf) {
            entropy += leaf.prob * leaf.entropy_bits;
        };
        detail::RecordEnumerator<decltype(visit)> walker(hmm, policy, horizon, visit);
        walker.run_prefix(task / hmm.num_observations(), task % hmm.num_observations());
        partial[task] = entropy;
    });
    double entropy = 0.0;
    for (double p : partial) entropy += p;
    return entropy;
}

Eigen::VectorXd score(const FiniteStatePolicy& policy, const ObservationRecord& record) {
    if (record.observations.size() != record.actions.size() || record.observations.empty()) {
        throw std::invalid_argument("record must hold equal-length, non-empty sequences");
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.num_parameters());
    int q = policy.initial_memory_state();
    for (std::size_t t = 0; t < record.actions.size(); ++t) {
        policy.accumulate_score(q, record.actions[t], 1.0, grad);
        q = policy.memory_update(q, record.observations[t]);
    }
    return grad;
}

}  // namespace minent
