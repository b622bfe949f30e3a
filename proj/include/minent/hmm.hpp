#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace minent {

/// Finite HMM whose emission distribution is controlled by a perception
/// action. Matrices follow the column-stochastic ("flipped") layout:
///
///   transition(i, j)    = P(next = i | current = j)
///   emissions(a)(o, j)  = P(observe o | state j, action a)
///
/// so a one-step likelihood update is a plain matrix-vector product.
/// Instances are immutable after construction and safe to share across
/// threads.
class Hmm {
public:
    Hmm(std::vector<std::string> observations,
        std::vector<std::string> actions,
        Eigen::MatrixXd transition,
        std::vector<Eigen::MatrixXd> emissions,
        Eigen::VectorXd mu0);

    int num_states() const { return static_cast<int>(transition_.rows()); }
    int num_observations() const { return static_cast<int>(observations_.size()); }
    int num_actions() const { return static_cast<int>(actions_.size()); }

    const std::vector<std::string>& observations() const { return observations_; }
    const std::vector<std::string>& actions() const { return actions_; }
    const Eigen::MatrixXd& transition() const { return transition_; }
    const Eigen::MatrixXd& emissions(int action) const { return emissions_[action]; }
    const Eigen::VectorXd& mu0() const { return mu0_; }

    /// States with strictly positive initial mass, ascending.
    const std::vector<int>& initial_support() const { return initial_support_; }

    /// Index lookups; throw std::domain_error naming the unknown symbol.
    int observation_index(std::string_view symbol) const;
    int action_index(std::string_view symbol) const;

private:
    std::vector<std::string> observations_;
    std::vector<std::string> actions_;
    Eigen::MatrixXd transition_;
    std::vector<Eigen::MatrixXd> emissions_;
    Eigen::VectorXd mu0_;
    std::vector<int> initial_support_;
};

/// One-step observable operator: matrix(i, j) = transition(i, j) * emissions(a)(o, j).
/// Chained products of these matrices yield observation-sequence likelihoods.
struct ObservableOperator {
    Eigen::MatrixXd matrix;
    int observation;
    int action;
};

ObservableOperator observable_operator(const Hmm& hmm, int observation, int action);

/// Symbol-based overload; unknown symbols raise std::domain_error.
ObservableOperator observable_operator(const Hmm& hmm, std::string_view observation,
                                       std::string_view action);

/// log P(o_seq | a_seq) starting from the initial distribution.
///
/// Computed with per-step rescaling of the running state-weight vector so
/// arbitrarily long horizons never underflow; returns -infinity when the
/// sequence has probability exactly zero.
double sequence_log_likelihood(const Hmm& hmm, std::span<const int> o_seq,
                               std::span<const int> a_seq);

/// log P(o_seq | a_seq, S_0 = s0): same recursion from a one-hot start.
double sequence_log_likelihood_from(const Hmm& hmm, int s0, std::span<const int> o_seq,
                                    std::span<const int> a_seq);

namespace detail {

/// In-place scaled forward step: weights -> normalize(A_{o|a} * (E_a(o,:) .* weights)).
/// Returns the log of the consumed scale factor, or -infinity when the step
/// annihilates all mass (in which case weights are left zeroed).
double forward_step(const Hmm& hmm, Eigen::VectorXd& weights, int observation, int action);

void check_symbol_indices(const Hmm& hmm, std::span<const int> o_seq, std::span<const int> a_seq);

}  // namespace detail

}  // namespace minent
