#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "emac/rng.hpp"

namespace emac::env {

/// Environment parameters of the single-cell uplink task.
///
/// Message index 0 is the null symbol in both control vocabularies.
struct SimConfig {
  int n_ue = 2;             // UEs sharing the uplink data channel
  int buffer_capacity = 5;  // SDUs per transmission buffer
  int total_sdus = 2;       // SDUs each UE must deliver
  double p_arrival = 0.5;   // per-TTI arrival probability
  double tbler = 0.1;       // erasure probability of an uncollided transport block
  int dl_vocab = 3;         // downlink control message alphabet size
  int ul_vocab = 2;         // uplink control message alphabet size
  int max_steps = 24;       // episode truncation, in TTIs
  int reward_param = 3;     // magnitude of the +/- reward events

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

enum class EnvAction : int { Nothing = 0, Transmit = 1, Delete = 2 };
inline constexpr int kEnvActionCount = 3;

struct UeAction {
  EnvAction env_action = EnvAction::Nothing;
  int ucm = 0;

  bool operator==(const UeAction&) const = default;
};

/// One downlink control message per UE.
struct BsAction {
  std::vector<int> dcm;

  bool operator==(const BsAction&) const = default;
};

/// Result of one TTI on the shared data channel. UE indices are 0-based.
struct ChannelOutcome {
  enum class Kind { Idle, Decoded, NonDecodable };

  Kind kind = Kind::Idle;
  int ue = -1;  // valid only for Decoded

  static ChannelOutcome idle() { return {}; }
  static ChannelOutcome decoded(int ue) { return {Kind::Decoded, ue}; }
  static ChannelOutcome non_decodable() { return {Kind::NonDecodable, -1}; }

  bool operator==(const ChannelOutcome&) const = default;
};

/// Ledger entry for one generated SDU.
///
/// `received_by_bs` is monotone. An SDU leaving the buffer by deletion while
/// not yet received is a wrongful deletion.
struct Sdu {
  std::size_t id = 0;
  int owner = 0;
  int generated_at = 0;
  bool in_buffer = false;
  bool received_by_bs = false;
  bool dropped = false;  // arrived into a full buffer, never deliverable

  bool operator==(const Sdu&) const = default;
};

struct EpisodeStats {
  int n_rx = 0;       // distinct SDUs received by the BS
  int n_ttis = 0;     // episode duration
  int n_generated = 0;
  int deletions = 0;
  int wrongful_deletions = 0;
  int dropped = 0;
  int collisions = 0;
  int erasures = 0;

  bool operator==(const EpisodeStats&) const = default;
};

struct EnvState {
  SimConfig config;
  int t = 0;
  std::vector<std::deque<std::size_t>> buffers;  // ledger indices, front is oldest
  std::vector<Sdu> ledger;
  std::vector<int> generated_count;
  std::vector<int> pending_dcm;  // delivered to each UE at the next TTI
  ChannelOutcome last_outcome;
  EpisodeStats stats;
  Rng rng;

  bool operator==(const EnvState&) const = default;
};

/// What the BS sees after the UEs acted within a TTI.
struct BsView {
  int observation = 0;        // channel observation, see bs_observation()
  std::span<const int> ucms;  // UCM sent by each UE this TTI
};

/// Events of one TTI that drive the reward.
struct StepEvents {
  bool new_sdu_received = false;
  int wrongful_deletions = 0;

  bool operator==(const StepEvents&) const = default;
};

struct StepInfo {
  ChannelOutcome outcome;
  StepEvents events;
  std::vector<int> transmitters;
  std::vector<int> dcm;  // DCMs chosen by the BS this TTI
};

struct StepResult {
  std::vector<int> ue_observations;  // buffer lengths after the TTI
  int bs_observation = 0;
  int reward = 0;
  bool done = false;
  StepInfo info;
};

}  // namespace emac::env
