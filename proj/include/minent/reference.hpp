#pragma once

#include <span>

#include "minent/hmm.hpp"
#include "minent/inference.hpp"
#include "minent/policy.hpp"

// Brute-force reference implementations. Everything here trades speed for
// transparency: plain products and exhaustive sums with none of the
// rescaling, pruning or factoring the production kernels use, so the two
// paths stay independently checkable. Only usable on tiny instances.

namespace minent::ref {

/// P(o_seq | a_seq) as the literal operator product, no rescaling.
/// Underflows for long horizons; that is the point.
double naive_sequence_likelihood(const Hmm& hmm, std::span<const int> o_seq,
                                 std::span<const int> a_seq);

/// P(o_seq | a_seq) by summing over all hidden state paths s_{0:T}.
double path_sequence_likelihood(const Hmm& hmm, std::span<const int> o_seq,
                                std::span<const int> a_seq);

/// Same with the start state fixed.
double path_sequence_likelihood_from(const Hmm& hmm, int s0, std::span<const int> o_seq,
                                     std::span<const int> a_seq);

/// P(y) = path likelihood times the policy factor.
double joint_prob(const Hmm& hmm, const FiniteStatePolicy& policy,
                  const ObservationRecord& record);

double joint_prob_given_s0(const Hmm& hmm, const FiniteStatePolicy& policy,
                           const ObservationRecord& record, int s0);

/// Bayes posterior over the initial support from the path-enumeration
/// likelihoods.
Eigen::VectorXd posterior(const Hmm& hmm, const FiniteStatePolicy& policy,
                          const ObservationRecord& record);

/// All (|O| |A|)^(T+1) records of the given horizon, odometer order.
std::vector<ObservationRecord> all_records(const Hmm& hmm, int horizon);

/// H(S_0 | Y) in bits by looping over every record and every hidden path.
double conditional_entropy(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon);

}  // namespace minent::ref
