#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "emac/env/types.hpp"

namespace emac::env {

using BsActionProvider = std::function<BsAction(const BsView&)>;

/// Reference configuration: N=2, B=5, P=2, p=0.5, TBLER=0.1, |D|=3, |U|=2,
/// T_max=24, R=3.
SimConfig reference_config();

/// Fresh episode with empty buffers and null pending DCMs.
EnvState new_episode(const SimConfig& config, std::uint64_t seed);

/// One Bernoulli arrival draw per UE that has not yet generated all its SDUs.
/// An arrival into a full buffer is counted as generated and dropped.
void arrival_step(EnvState& state);

/// Empty set: Idle. One transmitter: Decoded unless erased (one variate
/// consumed). Two or more: NonDecodable, no variate consumed.
ChannelOutcome resolve_channel(std::span<const int> transmitters, double tbler, Rng& rng);

/// 0 for idle, u+1 for a decoded PDU from 0-based UE u, n_ue+1 otherwise.
int bs_observation(const ChannelOutcome& outcome, int n_ue);

/// Current buffer length of UE u. Throws std::out_of_range for an invalid u.
int ue_observation(const EnvState& state, int u);

int compute_reward(const StepEvents& events, int reward_param);

bool episode_done(const EnvState& state);

/// Advances one TTI in a fixed order:
///   1. arrivals
///   2. UE environment actions (Delete removes, Transmit selects the oldest SDU)
///   3. channel resolution and BS reception
///   4. BS observes the channel and this TTI's UCMs; its DCMs reach UEs at t+1
///   5. reward
///   6. t advances
/// Throws UsageError when the episode is already done or actions are malformed.
StepResult step(EnvState& state, std::span<const UeAction> ue_actions,
                const BsActionProvider& bs_action_provider);

/// N_RX / N_TTIs. Throws MetricError for a zero-length episode.
double goodput(const EpisodeStats& stats);

/// N_RX / (P * N).
double delivery_rate(const EpisodeStats& stats, const SimConfig& config);

}  // namespace emac::env
