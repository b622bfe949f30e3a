#include "minent/policy.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "minent/hmm.hpp"

namespace minent {

FiniteStatePolicy::FiniteStatePolicy(int memory_length, std::vector<std::string> observations,
                                     std::vector<std::string> actions)
    : memory_length_(memory_length),
      observations_(std::move(observations)),
      actions_(std::move(actions)) {
    if (memory_length_ < 0) throw std::invalid_argument("memory_length must be >= 0");
    if (observations_.empty() || actions_.empty()) {
        throw std::invalid_argument("observation and action alphabets must be non-empty");
    }

    const int m = num_observations();
    // All observation strings of length <= K, shortest first. The layer of
    // length k is an m-ary odometer, so indices within a layer are
    // lexicographic by observation index.
    memory_strings_.push_back({});
    std::size_t layer_begin = 0;
    for (int k = 1; k <= memory_length_; ++k) {
        std::size_t layer_end = memory_strings_.size();
        for (std::size_t q = layer_begin; q < layer_end; ++q) {
            for (int o = 0; o < m; ++o) {
                std::vector<int> extended = memory_strings_[q];
                extended.push_back(o);
                memory_strings_.push_back(std::move(extended));
            }
        }
        layer_begin = layer_end;
    }

    std::map<std::vector<int>, int> index_of;
    for (std::size_t q = 0; q < memory_strings_.size(); ++q) {
        index_of[memory_strings_[q]] = static_cast<int>(q);
    }
    next_state_.resize(memory_strings_.size() * m);
    for (std::size_t q = 0; q < memory_strings_.size(); ++q) {
        for (int o = 0; o < m; ++o) {
            std::vector<int> suffix = memory_strings_[q];
            suffix.push_back(o);
            if (static_cast<int>(suffix.size()) > memory_length_) {
                suffix.erase(suffix.begin());
            }
            next_state_[q * m + o] = index_of.at(suffix);
        }
    }

    theta_ = Eigen::MatrixXd::Zero(num_memory_states(), num_actions());
}

std::string FiniteStatePolicy::memory_label(int q) const {
    std::string label;
    const std::vector<int>& s = memory_strings_.at(q);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) label += '|';
        label += observations_[s[i]];
    }
    return label;
}

int FiniteStatePolicy::memory_state_by_label(std::string_view label) const {
    for (int q = 0; q < num_memory_states(); ++q) {
        if (memory_label(q) == label) return q;
    }
    throw std::domain_error("unknown memory state label '" + std::string(label) + "'");
}

int FiniteStatePolicy::memory_update(int q, int observation) const {
    if (q < 0 || q >= num_memory_states()) {
        throw std::domain_error("memory state index " + std::to_string(q) + " out of range");
    }
    if (observation < 0 || observation >= num_observations()) {
        throw std::domain_error("unknown observation index " + std::to_string(observation));
    }
    if (memory_length_ == 0) return 0;
    return next_state_[q * num_observations() + observation];
}

Eigen::VectorXd FiniteStatePolicy::action_distribution(int q) const {
    if (q < 0 || q >= num_memory_states()) {
        throw std::domain_error("memory state index " + std::to_string(q) + " out of range");
    }
    Eigen::VectorXd logits = theta_.row(q).transpose();
    logits.array() -= logits.maxCoeff();
    Eigen::VectorXd probs = logits.array().exp();
    probs /= probs.sum();
    return probs;
}

Eigen::VectorXd FiniteStatePolicy::log_policy_gradient(int q, int a) const {
    if (a < 0 || a >= num_actions()) {
        throw std::domain_error("action index " + std::to_string(a) + " out of range");
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_parameters());
    accumulate_score(q, a, 1.0, grad);
    return grad;
}

void FiniteStatePolicy::accumulate_score(int q, int a, double weight,
                                         Eigen::VectorXd& into) const {
    Eigen::VectorXd probs = action_distribution(q);
    const int base = q * num_actions();
    for (int b = 0; b < num_actions(); ++b) {
        into(base + b) += weight * ((b == a ? 1.0 : 0.0) - probs(b));
    }
}

int FiniteStatePolicy::act(int q, Pcg32& rng) const {
    Eigen::VectorXd probs = action_distribution(q);
    int action = sample_discrete({probs.data(), static_cast<std::size_t>(probs.size())},
                                 rng.next_double());
    if (action < 0) {
        throw std::runtime_error("output distribution of memory state " + std::to_string(q) +
                                 " is invalid (non-finite parameters?)");
    }
    return action;
}

void FiniteStatePolicy::set_theta(const Eigen::MatrixXd& theta) {
    if (theta.rows() != num_memory_states() || theta.cols() != num_actions()) {
        throw std::invalid_argument("theta has wrong shape");
    }
    theta_ = theta;
}

Eigen::VectorXd FiniteStatePolicy::theta_flat() const {
    Eigen::VectorXd flat(num_parameters());
    for (int q = 0; q < num_memory_states(); ++q) {
        for (int a = 0; a < num_actions(); ++a) flat(parameter_index(q, a)) = theta_(q, a);
    }
    return flat;
}

void FiniteStatePolicy::set_theta_flat(const Eigen::VectorXd& flat) {
    if (flat.size() != num_parameters()) {
        throw std::invalid_argument("flat theta has wrong length");
    }
    for (int q = 0; q < num_memory_states(); ++q) {
        for (int a = 0; a < num_actions(); ++a) theta_(q, a) = flat(parameter_index(q, a));
    }
}

void require_compatible(const Hmm& hmm, const FiniteStatePolicy& policy) {
    if (hmm.observations() != policy.observations() || hmm.actions() != policy.actions()) {
        throw std::invalid_argument("policy and model alphabets do not match");
    }
}

}  // namespace minent
