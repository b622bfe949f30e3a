#include "minent/reference.hpp"

#include <cmath>

namespace minent::ref {

namespace {

// Sum of f(path) over all state paths of length `length`.
template <typename PathValue>
double sum_over_paths(int num_states, int length, PathValue&& value) {
    std::vector<int> path(length, 0);
    double total = 0.0;
    while (true) {
        total += value(path);
        int pos = length - 1;
        while (pos >= 0 && ++path[pos] == num_states) {
            path[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return total;
}

double path_probability(const Hmm& hmm, const std::vector<int>& path,
                        std::span<const int> o_seq, std::span<const int> a_seq) {
    double p = hmm.mu0()(path[0]);
    for (std::size_t t = 0; t < o_seq.size(); ++t) {
        p *= hmm.emissions(a_seq[t])(o_seq[t], path[t]);
        if (t + 1 < o_seq.size()) p *= hmm.transition()(path[t + 1], path[t]);
    }
    return p;
}

}  // namespace

double naive_sequence_likelihood(const Hmm& hmm, std::span<const int> o_seq,
                                 std::span<const int> a_seq) {
    Eigen::VectorXd v = hmm.mu0();
    for (std::size_t t = 0; t < o_seq.size(); ++t) {
        v = observable_operator(hmm, o_seq[t], a_seq[t]).matrix * v;
    }
    return v.sum();
}

double path_sequence_likelihood(const Hmm& hmm, std::span<const int> o_seq,
                                std::span<const int> a_seq) {
    return sum_over_paths(hmm.num_states(), static_cast<int>(o_seq.size()),
                          [&](const std::vector<int>& path) {
                              return path_probability(hmm, path, o_seq, a_seq);
                          });
}

double path_sequence_likelihood_from(const Hmm& hmm, int s0, std::span<const int> o_seq,
                                     std::span<const int> a_seq) {
    return sum_over_paths(hmm.num_states(), static_cast<int>(o_seq.size()),
                          [&](const std::vector<int>& path) {
                              if (path[0] != s0) return 0.0;
                              double p = path_probability(hmm, path, o_seq, a_seq);
                              double prior = hmm.mu0()(s0);
                              return prior > 0.0 ? p / prior : 0.0;
                          });
}

double joint_prob(const Hmm& hmm, const FiniteStatePolicy& policy,
                  const ObservationRecord& record) {
    return path_sequence_likelihood(hmm, record.observations, record.actions) *
           std::exp(log_policy_prob(policy, record));
}

double joint_prob_given_s0(const Hmm& hmm, const FiniteStatePolicy& policy,
                           const ObservationRecord& record, int s0) {
    return path_sequence_likelihood_from(hmm, s0, record.observations, record.actions) *
           std::exp(log_policy_prob(policy, record));
}

Eigen::VectorXd posterior(const Hmm& hmm, const FiniteStatePolicy& policy,
                          const ObservationRecord& record) {
    const std::vector<int>& support = hmm.initial_support();
    Eigen::VectorXd weights(support.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
        weights(k) = joint_prob_given_s0(hmm, policy, record, support[k]) *
                     hmm.mu0()(support[k]);
    }
    return weights / weights.sum();
}

std::vector<ObservationRecord> all_records(const Hmm& hmm, int horizon) {
    const int steps = horizon + 1;
    std::vector<ObservationRecord> records;
    ObservationRecord current;
    current.observations.assign(steps, 0);
    current.actions.assign(steps, 0);
    while (true) {
        records.push_back(current);
        // Odometer: actions advance fastest within a step, observations
        // next, later steps roll over into earlier ones last.
        int pos = steps - 1;
        while (pos >= 0) {
            if (++current.actions[pos] < hmm.num_actions()) break;
            current.actions[pos] = 0;
            if (++current.observations[pos] < hmm.num_observations()) break;
            current.observations[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return records;
}

double conditional_entropy(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon) {
    const std::vector<int>& support = hmm.initial_support();
    double entropy = 0.0;
    for (const ObservationRecord& record : all_records(hmm, horizon)) {
        double p_y = joint_prob(hmm, policy, record);
        if (p_y <= 0.0) continue;
        for (int s0 : support) {
            double joint_s0 = joint_prob_given_s0(hmm, policy, record, s0) * hmm.mu0()(s0);
            if (joint_s0 <= 0.0) continue;
            double posterior = joint_s0 / p_y;
            entropy -= p_y * posterior * std::log2(posterior);
        }
    }
    return entropy;
}

}  // namespace minent::ref
