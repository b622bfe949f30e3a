#pragma once

#include <Eigen/Dense>
#include <vector>

#include "minent/exec.hpp"
#include "minent/hmm.hpp"
#include "minent/policy.hpp"

namespace minent {

/// The observable part of an episode: paired observation and action
/// sequences of equal length T+1 (symbol indices).
struct ObservationRecord {
    std::vector<int> observations;
    std::vector<int> actions;

    int horizon() const { return static_cast<int>(observations.size()) - 1; }
    bool operator==(const ObservationRecord&) const = default;
};

/// Posterior over the initial state, restricted to the prior's support.
/// probs(k) is the mass on state support[k]; entries are exactly zero for
/// start states that cannot have produced the record.
struct Posterior {
    std::vector<int> support;
    Eigen::VectorXd probs;
};

/// Sum over steps of log psi(a_t | q_t) along the replayed memory states.
/// Finite for softmax policies.
double log_policy_prob(const FiniteStatePolicy& policy, const ObservationRecord& record);

/// log P(o_{0:T}, a_{0:T}) under the process induced by the policy:
/// sequence likelihood plus the policy factor. -infinity iff the
/// observations are impossible under the actions.
double joint_log_prob(const Hmm& hmm, const FiniteStatePolicy& policy,
                      const ObservationRecord& record);

/// Same, conditioned on S_0 = s0. s0 must lie in the initial support.
double joint_log_prob_given_s0(const Hmm& hmm, const FiniteStatePolicy& policy,
                               const ObservationRecord& record, int s0);

/// Bayes posterior over the initial state given the record. The policy
/// factor cancels between numerator and denominator and is never
/// evaluated, which is why the result is invariant in theta. Throws
/// ImpossibleObservationError when the record has probability zero.
Posterior posterior(const Hmm& hmm, const FiniteStatePolicy& policy,
                    const ObservationRecord& record);

/// Shannon entropy of the posterior in bits, with 0 log 0 = 0.
double entropy_given_observation(const Posterior& posterior);

/// H(S_0 | Y_{0:T}) in bits by exhaustive enumeration of all records,
/// pruning zero-probability prefixes. Requires (|O| |A|)^(T+1) within the
/// enumeration budget; otherwise throws BudgetError.
double exact_conditional_entropy(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                                 const EnumerationOptions& options = {});

/// Score of the record: grad_theta log P_theta(y), which telescopes to the
/// sum of per-step softmax score rows. Invariant to the start state.
Eigen::VectorXd score(const FiniteStatePolicy& policy, const ObservationRecord& record);

namespace detail {
void check_record(const Hmm& hmm, const FiniteStatePolicy& policy,
                  const ObservationRecord& record);
double entropy_bits_from_unnormalized(const Eigen::VectorXd& weights);
}  // namespace detail

}  // namespace minent
