#include "minent/simulator.hpp"

#include <stdexcept>

#include "parallel.hpp"

namespace minent {

Trajectory sample_trajectory(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                             Pcg32& rng) {
    require_compatible(hmm, policy);
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");

    Trajectory traj;
    traj.states.reserve(horizon + 1);
    traj.record.observations.reserve(horizon + 1);
    traj.record.actions.reserve(horizon + 1);

    const Eigen::VectorXd& mu0 = hmm.mu0();
    int state = sample_discrete({mu0.data(), static_cast<std::size_t>(mu0.size())},
                                rng.next_double());
    int q = policy.initial_memory_state();
    for (int t = 0; t <= horizon; ++t) {
        traj.states.push_back(state);
        int action = policy.act(q, rng);
        const Eigen::MatrixXd& emis = hmm.emissions(action);
        int obs = sample_discrete({emis.col(state).data(),
                                   static_cast<std::size_t>(emis.rows())},
                                  rng.next_double());
        traj.record.actions.push_back(action);
        traj.record.observations.push_back(obs);
        q = policy.memory_update(q, obs);
        if (t < horizon) {
            const Eigen::MatrixXd& trans = hmm.transition();
            state = sample_discrete({trans.col(state).data(),
                                     static_cast<std::size_t>(trans.rows())},
                                    rng.next_double());
        }
    }
    return traj;
}

std::vector<Trajectory> sample_batch(const Hmm& hmm, const FiniteStatePolicy& policy,
                                     int horizon, int count, std::uint64_t seed,
                                     ExecMode exec) {
    require_compatible(hmm, policy);
    if (count < 1) throw std::invalid_argument("batch count must be >= 1");

    std::vector<Trajectory> batch(count);
    auto sample_one = [&](int k) {
        Pcg32 rng(seed, static_cast<std::uint64_t>(k));
        batch[k] = sample_trajectory(hmm, policy, horizon, rng);
        batch[k].seed_tag = static_cast<std::uint64_t>(k);
    };
    if (exec == ExecMode::serial) {
        for (int k = 0; k < count; ++k) sample_one(k);
    } else {
        detail::parallel_for(count, sample_one);
    }
    return batch;
}

}  // namespace minent
