#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "minent/gradient.hpp"
#include "minent/gridworld.hpp"
#include "minent/hmm.hpp"
#include "minent/inference.hpp"
#include "minent/policy.hpp"
#include "minent/simulator.hpp"

// File formats. All writers emit shortest round-trip doubles, so equal
// values always serialize to equal bytes.
//
//   cehmm-v1   HMM: {"format","num_states","observations","actions",
//              "transition" (row i, col j = P(i|j)), "emissions"
//              (per action, rows o, cols j), "mu0"}
//   fsp-v1     policy: {"format","memory_length","observations","actions",
//              "theta": {"<obs|obs|...>": {action: value}}}; the empty
//              suffix is keyed "".
//   gridworld-v1  spec: {"format","width","height","walls","robot_types",
//              "slip_prob","sensors","detection_prob","type_prior"}
//   records    JSON lines {"o":[symbols],"a":[symbols]}
//   trajectories  JSON lines {"states":[...],"o":[...],"a":[...],"seed_tag":k}

namespace minent::io {

std::string hmm_to_json(const Hmm& hmm);
Hmm hmm_from_json(const std::string& text);
void save_hmm(const Hmm& hmm, const std::filesystem::path& path);
Hmm load_hmm(const std::filesystem::path& path);

std::string policy_to_json(const FiniteStatePolicy& policy);
FiniteStatePolicy policy_from_json(const std::string& text);
void save_policy(const FiniteStatePolicy& policy, const std::filesystem::path& path);
FiniteStatePolicy load_policy(const std::filesystem::path& path);

std::string gridworld_to_json(const GridWorldSpec& spec);
GridWorldSpec gridworld_from_json(const std::string& text);
GridWorldSpec load_gridworld(const std::filesystem::path& path);

/// (type, cell) labels for every compiled HMM state.
std::string state_index_to_json(const CompiledEnvironment& env);

ObservationRecord record_from_json_line(const Hmm& hmm, const std::string& line);
std::string record_to_json_line(const Hmm& hmm, const ObservationRecord& record);

/// {"posterior": {state: prob}, "entropy_bits": h}
std::string posterior_to_json(const Posterior& posterior);

std::string trajectory_to_json_line(const Hmm& hmm, const Trajectory& trajectory);

/// {"theta_grad": {memory: {action: value}}, "entropy_bits": h, "M": m}
std::string gradient_to_json(const FiniteStatePolicy& policy, const GradientEstimate& estimate);

}  // namespace minent::io
