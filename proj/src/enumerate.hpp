#pragma once

// Depth-first enumeration of all observation/action records of a fixed
// horizon, carrying per-start-state forward vectors so each record's
// probability and posterior come out of one walk. Shared by the exact
// entropy and exact gradient kernels; not part of the public interface.

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "minent/hmm.hpp"
#include "minent/inference.hpp"
#include "minent/policy.hpp"

namespace minent::detail {

struct EnumeratedRecord {
    double prob;          // P(y)
    double entropy_bits;  // H(S_0 | Y = y)
    // (memory state, action) per step; spans the full horizon at a leaf.
    const std::vector<std::pair<int, int>>& qa_path;
    const std::vector<int>& obs_path;
};

/// visit(const EnumeratedRecord&) is called once per record with positive
/// probability, in depth-first order (actions outer, observations inner).
template <typename Visitor>
class RecordEnumerator {
public:
    RecordEnumerator(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                     Visitor& visit)
        : hmm_(hmm), policy_(policy), horizon_(horizon), visit_(visit) {
        const int n = hmm.num_states();
        support_ = hmm.initial_support();
        const int k = static_cast<int>(support_.size());

        operators_.reserve(static_cast<std::size_t>(hmm.num_actions()) * hmm.num_observations());
        for (int a = 0; a < hmm.num_actions(); ++a) {
            for (int o = 0; o < hmm.num_observations(); ++o) {
                operators_.push_back(observable_operator(hmm, o, a).matrix);
            }
        }

        frames_.assign(horizon + 2, Eigen::MatrixXd::Zero(n, k));
        for (int c = 0; c < k; ++c) frames_[0](support_[c], c) = 1.0;
        qa_path_.resize(horizon + 1);
        obs_path_.resize(horizon + 1);
        prior_.resize(k);
        for (int c = 0; c < k; ++c) prior_(c) = hmm.mu0()(support_[c]);
    }

    void run_all() {
        descend(0, policy_.initial_memory_state(), 0.0, 0.0);
    }

    /// Enumerates only the subtree with the given first step; the union of
    /// all (a0, o0) calls visits exactly the records run_all() visits.
    void run_prefix(int a0, int o0) {
        const int q0 = policy_.initial_memory_state();
        double log_pi = std::log(policy_.action_distribution(q0)(a0));
        double log_scale = apply_operator(0, a0, o0);
        if (!std::isfinite(log_scale)) return;
        qa_path_[0] = {q0, a0};
        obs_path_[0] = o0;
        descend(1, policy_.memory_update(q0, o0), log_pi, log_scale);
    }

private:
    // frames_[t + 1] = normalize(A_{o|a} * frames_[t]); returns log of the
    // grand scale factor, -inf when the subtree is impossible.
    double apply_operator(int t, int a, int o) {
        frames_[t + 1].noalias() =
            operators_[static_cast<std::size_t>(a) * hmm_.num_observations() + o] * frames_[t];
        double scale = frames_[t + 1].sum();
        if (scale <= 0.0) return -std::numeric_limits<double>::infinity();
        frames_[t + 1] /= scale;
        return std::log(scale);
    }

    void descend(int t, int q, double log_pi, double log_scale) {
        if (t == horizon_ + 1) {
            Eigen::VectorXd weights =
                prior_.cwiseProduct(frames_[t].colwise().sum().transpose());
            double total = weights.sum();
            if (total <= 0.0) return;
            EnumeratedRecord leaf{std::exp(log_pi + log_scale) * total,
                                  entropy_bits_from_unnormalized(weights), qa_path_, obs_path_};
            visit_(leaf);
            return;
        }
        Eigen::VectorXd action_probs = policy_.action_distribution(q);
        for (int a = 0; a < policy_.num_actions(); ++a) {
            double step_log_pi = log_pi + std::log(action_probs(a));
            for (int o = 0; o < hmm_.num_observations(); ++o) {
                double step_scale = apply_operator(t, a, o);
                if (!std::isfinite(step_scale)) continue;  // prune impossible prefix
                qa_path_[t] = {q, a};
                obs_path_[t] = o;
                descend(t + 1, policy_.memory_update(q, o), step_log_pi,
                        log_scale + step_scale);
            }
        }
    }

    const Hmm& hmm_;
    const FiniteStatePolicy& policy_;
    int horizon_;
    Visitor& visit_;
    std::vector<int> support_;
    Eigen::VectorXd prior_;
    std::vector<Eigen::MatrixXd> operators_;
    std::vector<Eigen::MatrixXd> frames_;
    std::vector<std::pair<int, int>> qa_path_;
    std::vector<int> obs_path_;
};

/// Number of records a full enumeration must visit, as a double so that
/// astronomically large horizons do not overflow before the budget check.
double enumeration_size(const Hmm& hmm, int horizon);

void check_enumeration_budget(const Hmm& hmm, int horizon, std::int64_t budget);

}  // namespace minent::detail
