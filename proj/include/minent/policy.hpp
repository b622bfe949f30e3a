#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "minent/rng.hpp"

namespace minent {

/// Stochastic perception policy with suffix memory: the memory state is the
/// string of the last (up to) K observations, and the output distribution
/// over actions is a softmax over one parameter row per memory state.
///
/// Memory states are indexed by length then lexicographically by
/// observation index, so state 0 is always the empty suffix.
class FiniteStatePolicy {
public:
    /// Builds the policy with theta = 0 (uniform outputs everywhere).
    FiniteStatePolicy(int memory_length, std::vector<std::string> observations,
                      std::vector<std::string> actions);

    int memory_length() const { return memory_length_; }
    int num_memory_states() const { return static_cast<int>(memory_strings_.size()); }
    int num_observations() const { return static_cast<int>(observations_.size()); }
    int num_actions() const { return static_cast<int>(actions_.size()); }
    int num_parameters() const { return num_memory_states() * num_actions(); }
    int initial_memory_state() const { return 0; }

    const std::vector<std::string>& observations() const { return observations_; }
    const std::vector<std::string>& actions() const { return actions_; }

    /// The observation-index string a memory state stands for.
    const std::vector<int>& memory_string(int q) const { return memory_strings_[q]; }

    /// Observation symbols joined by "|"; the empty suffix is "".
    std::string memory_label(int q) const;
    int memory_state_by_label(std::string_view label) const;

    /// delta(q, o): index of the last min(K, |q|+1) symbols of q.o.
    int memory_update(int q, int observation) const;

    /// softmax(theta row of q), computed with max subtraction.
    Eigen::VectorXd action_distribution(int q) const;

    /// Gradient of log action_distribution(q)(a) in theta, as a dense
    /// parameter-space vector: entry (q, a') = 1{a = a'} - psi(a' | q),
    /// zero outside row q. Every entry is bounded by 1 in magnitude.
    Eigen::VectorXd log_policy_gradient(int q, int a) const;

    /// Adds weight * log_policy_gradient(q, a) into `into` without
    /// materializing the sparse vector.
    void accumulate_score(int q, int a, double weight, Eigen::VectorXd& into) const;

    /// Samples an action from action_distribution(q) using the stream.
    int act(int q, Pcg32& rng) const;

    const Eigen::MatrixXd& theta() const { return theta_; }
    void set_theta(const Eigen::MatrixXd& theta);

    /// Row-major flattening: parameter (q, a) lives at index q * |A| + a.
    int parameter_index(int q, int a) const { return q * num_actions() + a; }
    Eigen::VectorXd theta_flat() const;
    void set_theta_flat(const Eigen::VectorXd& flat);

private:
    int memory_length_;
    std::vector<std::string> observations_;
    std::vector<std::string> actions_;
    std::vector<std::vector<int>> memory_strings_;
    std::vector<int> next_state_;  // |Q| x |O|, flattened
    Eigen::MatrixXd theta_;        // |Q| x |A|
};

/// Throws std::invalid_argument unless the policy was built over the same
/// observation and action alphabets as the model.
class Hmm;
void require_compatible(const Hmm& hmm, const FiniteStatePolicy& policy);

}  // namespace minent
