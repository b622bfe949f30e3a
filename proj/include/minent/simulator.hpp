#pragma once

#include <cstdint>
#include <vector>

#include "minent/exec.hpp"
#include "minent/hmm.hpp"
#include "minent/inference.hpp"
#include "minent/policy.hpp"
#include "minent/rng.hpp"

namespace minent {

/// One sampled episode: hidden states s_{0:T} plus its observable record.
/// For batch samples, seed_tag is the PCG stream id (the batch index);
/// together with the batch's root seed it pins down the substream used.
struct Trajectory {
    std::vector<int> states;
    ObservationRecord record;
    std::uint64_t seed_tag = 0;
};

/// Draws one episode. Per step t: a_t from the policy's memory state, o_t
/// from the emission column of the current state, then the transition to
/// s_{t+1} (the draw for the step after the horizon is skipped).
Trajectory sample_trajectory(const Hmm& hmm, const FiniteStatePolicy& policy, int horizon,
                             Pcg32& rng);

/// M independent episodes; episode k uses the substream Pcg32(seed, k), so
/// the batch content is a pure function of (seed, M, horizon) and identical
/// for any thread count or execution mode.
std::vector<Trajectory> sample_batch(const Hmm& hmm, const FiniteStatePolicy& policy,
                                     int horizon, int count, std::uint64_t seed,
                                     ExecMode exec = ExecMode::parallel);

}  // namespace minent
