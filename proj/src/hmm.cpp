#include "minent/hmm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace minent {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_column_stochastic(const Eigen::MatrixXd& m, const std::string& name) {
    for (int j = 0; j < m.cols(); ++j) {
        double sum = 0.0;
        for (int i = 0; i < m.rows(); ++i) {
            if (m(i, j) < 0.0) {
                throw std::invalid_argument(name + " has a negative entry at (" +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            sum += m(i, j);
        }
        if (std::abs(sum - 1.0) > kStochasticTol) {
            throw std::invalid_argument(name + " column " + std::to_string(j) +
                                        " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
}

}  // namespace

Hmm::Hmm(std::vector<std::string> observations, std::vector<std::string> actions,
         Eigen::MatrixXd transition, std::vector<Eigen::MatrixXd> emissions, Eigen::VectorXd mu0)
    : observations_(std::move(observations)),
      actions_(std::move(actions)),
      transition_(std::move(transition)),
      emissions_(std::move(emissions)),
      mu0_(std::move(mu0)) {
    const int n = static_cast<int>(transition_.rows());
    if (n == 0 || transition_.cols() != n) {
        throw std::invalid_argument("transition matrix must be square and non-empty");
    }
    if (observations_.empty() || actions_.empty()) {
        throw std::invalid_argument("observation and action alphabets must be non-empty");
    }
    if (emissions_.size() != actions_.size()) {
        throw std::invalid_argument("expected one emission matrix per action");
    }
    check_column_stochastic(transition_, "transition");
    for (std::size_t a = 0; a < emissions_.size(); ++a) {
        const Eigen::MatrixXd& e = emissions_[a];
        if (e.rows() != static_cast<int>(observations_.size()) || e.cols() != n) {
            throw std::invalid_argument("emission matrix for action '" + actions_[a] +
                                        "' has wrong shape");
        }
        check_column_stochastic(e, "emissions[" + actions_[a] + "]");
    }
    if (mu0_.size() != n) {
        throw std::invalid_argument("mu0 length does not match the state count");
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (mu0_(i) < 0.0) throw std::invalid_argument("mu0 has a negative entry");
        sum += mu0_(i);
        if (mu0_(i) > 0.0) initial_support_.push_back(i);
    }
    if (std::abs(sum - 1.0) > kStochasticTol) {
        throw std::invalid_argument("mu0 sums to " + std::to_string(sum) + ", expected 1");
    }
}

int Hmm::observation_index(std::string_view symbol) const {
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        if (observations_[i] == symbol) return static_cast<int>(i);
    }
    throw std::domain_error("unknown observation symbol '" + std::string(symbol) + "'");
}

int Hmm::action_index(std::string_view symbol) const {
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (actions_[i] == symbol) return static_cast<int>(i);
    }
    throw std::domain_error("unknown action symbol '" + std::string(symbol) + "'");
}

ObservableOperator observable_operator(const Hmm& hmm, int observation, int action) {
    if (observation < 0 || observation >= hmm.num_observations()) {
        throw std::domain_error("unknown observation index " + std::to_string(observation));
    }
    if (action < 0 || action >= hmm.num_actions()) {
        throw std::domain_error("unknown action index " + std::to_string(action));
    }
    ObservableOperator op;
    op.observation = observation;
    op.action = action;
    op.matrix = hmm.transition() * hmm.emissions(action).row(observation).asDiagonal();
    return op;
}

ObservableOperator observable_operator(const Hmm& hmm, std::string_view observation,
                                       std::string_view action) {
    return observable_operator(hmm, hmm.observation_index(observation),
                               hmm.action_index(action));
}

namespace detail {

double forward_step(const Hmm& hmm, Eigen::VectorXd& weights, int observation, int action) {
    weights = weights.cwiseProduct(hmm.emissions(action).row(observation).transpose());
    weights = hmm.transition() * weights;
    double scale = weights.sum();
    if (scale <= 0.0) {
        weights.setZero();
        return kNegInf;
    }
    weights /= scale;
    return std::log(scale);
}

void check_symbol_indices(const Hmm& hmm, std::span<const int> o_seq, std::span<const int> a_seq) {
    if (o_seq.size() != a_seq.size()) {
        throw std::invalid_argument("observation and action sequences must have equal length");
    }
    if (o_seq.empty()) {
        throw std::invalid_argument("sequences must contain at least one step");
    }
    for (int o : o_seq) {
        if (o < 0 || o >= hmm.num_observations()) {
            throw std::domain_error("unknown observation index " + std::to_string(o));
        }
    }
    for (int a : a_seq) {
        if (a < 0 || a >= hmm.num_actions()) {
            throw std::domain_error("unknown action index " + std::to_string(a));
        }
    }
}

}  // namespace detail

namespace {

double scaled_forward(const Hmm& hmm, Eigen::VectorXd start, std::span<const int> o_seq,
                      std::span<const int> a_seq) {
    detail::check_symbol_indices(hmm, o_seq, a_seq);
    double log_prob = 0.0;
    for (std::size_t t = 0; t < o_seq.size(); ++t) {
        double step = detail::forward_step(hmm, start, o_seq[t], a_seq[t]);
        if (step == kNegInf) return kNegInf;
        log_prob += step;
    }
    return log_prob;
}

}  // namespace

double sequence_log_likelihood(const Hmm& hmm, std::span<const int> o_seq,
                               std::span<const int> a_seq) {
    return scaled_forward(hmm, hmm.mu0(), o_seq, a_seq);
}

double sequence_log_likelihood_from(const Hmm& hmm, int s0, std::span<const int> o_seq,
                                    std::span<const int> a_seq) {
    if (s0 < 0 || s0 >= hmm.num_states()) {
        throw std::domain_error("state index " + std::to_string(s0) + " out of range");
    }
    Eigen::VectorXd one_hot = Eigen::VectorXd::Zero(hmm.num_states());
    one_hot(s0) = 1.0;
    return scaled_forward(hmm, std::move(one_hot), o_seq, a_seq);
}

}  // namespace minent
