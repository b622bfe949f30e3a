#include "minent/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "minent/errors.hpp"
#include "minent/inference.hpp"
#include "minent/simulator.hpp"

namespace minent {

namespace {

// Separate derivation domains so gradient batches, evaluation batches and
// random-search theta draws never share a substream.
constexpr std::uint64_t kEvalDomain = 0x45564142'41544348ULL;
constexpr std::uint64_t kThetaStream = 1ULL << 63;

double batch_mean_entropy(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                          int count, std::uint64_t seed, ExecMode exec) {
    std::vector<Trajectory> batch = sample_batch(hmm, policy, horizon, count, seed, exec);
    double mean = 0.0;
    for (const Trajectory& traj : batch) {
        mean += entropy_given_observation(posterior(hmm, policy, traj.record));
    }
    return mean / count;
}

}  // namespace

void TrainLog::write_csv(std::ostream& out) const {
    out << "iteration,entropy_bits,grad_inf_norm,seconds\n";
    char line[160];
    for (const TrainLogEntry& e : entries) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.3f\n", e.iteration, e.entropy_bits,
                      e.grad_inf_norm, e.seconds);
        out << line;
    }
}

TrainResult train(const Hmm& hmm, const FiniteStatePolicy& initial_policy,
                  const TrainConfig& config,
                  const std::function<void(const TrainLogEntry&)>& observer) {
    require_compatible(hmm, initial_policy);
    if (config.step_size <= 0.0) throw std::invalid_argument("step size must be > 0");
    if (config.iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
    if (config.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (config.mode == GradientMode::sampled && config.samples_per_iter < 1) {
        throw std::invalid_argument("samples_per_iter must be >= 1 in sampled mode");
    }

    TrainResult result{initial_policy, {}, false, 0};
    FiniteStatePolicy& policy = result.policy;
    const auto start_time = std::chrono::steady_clock::now();

    for (int tau = 0; tau < config.iterations; ++tau) {
        const std::uint64_t batch_seed = derive_seed(config.seed, static_cast<std::uint64_t>(tau));

        // Catches divergence (a step that blew the parameters up) before
        // the batch touches the broken softmax.
        if (!policy.theta().allFinite()) {
            throw TrainAbortError("non-finite policy parameters at iteration " +
                                      std::to_string(tau) + " (batch seed " +
                                      std::to_string(batch_seed) + ")",
                                  tau, batch_seed);
        }

        GradientEstimate grad;
        if (config.mode == GradientMode::exact) {
            grad = exact_gradient(hmm, policy, config.horizon,
                                  {config.budget, config.exec});
        } else {
            SampledGradientOptions opts;
            opts.mean_entropy_baseline = config.mean_entropy_baseline;
            opts.exec = config.exec;
            grad = sampled_gradient(hmm, policy, config.horizon, config.samples_per_iter,
                                    batch_seed, opts);
        }
        if (!grad.vector.allFinite()) {
            throw TrainAbortError("non-finite gradient at iteration " + std::to_string(tau) +
                                      " (batch seed " + std::to_string(batch_seed) + ")",
                                  tau, batch_seed);
        }

        double entropy = grad.entropy_estimate;
        if (config.eval_samples > 0 && config.mode == GradientMode::sampled) {
            entropy = batch_mean_entropy(hmm, policy, config.horizon, config.eval_samples,
                                         derive_seed(config.seed ^ kEvalDomain,
                                                     static_cast<std::uint64_t>(tau)),
                                         config.exec);
        }

        const double grad_norm = grad.vector.lpNorm<Eigen::Infinity>();
        const bool at_stationary_point = grad_norm < config.grad_norm_tol;
        const bool last = at_stationary_point && config.early_stop;
        if (tau % config.log_every == 0 || tau == config.iterations - 1 || last) {
            std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start_time;
            TrainLogEntry entry{tau, entropy, grad_norm, elapsed.count()};
            result.log.entries.push_back(entry);
            if (observer) observer(entry);
        }

        if (last) {
            result.stopped_early = true;
            result.iterations_run = tau + 1;
            return result;
        }
        policy.set_theta_flat(policy.theta_flat() - config.step_size * grad.vector);
        result.iterations_run = tau + 1;
    }
    return result;
}

RandomSearchResult random_policy_search(const Hmm& hmm, int memory_length, int horizon,
                                        int trials, std::uint64_t seed,
                                        const RandomSearchOptions& options) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    FiniteStatePolicy candidate(memory_length, hmm.observations(), hmm.actions());
    RandomSearchResult best{candidate, 0.0};
    bool have_best = false;

    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
        Pcg32 rng(trial_seed, kThetaStream);
        Eigen::VectorXd theta(candidate.num_parameters());
        for (int i = 0; i < theta.size(); ++i) theta(i) = rng.next_normal();
        candidate.set_theta_flat(theta);

        double entropy;
        if (options.eval_mode == GradientMode::exact) {
            entropy = exact_conditional_entropy(hmm, candidate, horizon,
                                                {options.budget, options.exec});
        } else {
            entropy = batch_mean_entropy(hmm, candidate, horizon, options.eval_samples,
                                         trial_seed, options.exec);
        }
        if (!have_best || entropy < best.entropy_bits) {
            best.policy = candidate;
            best.entropy_bits = entropy;
            have_best = true;
        }
    }
    return best;
}

}  // namespace minent
