#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emac/env/environment.hpp"
#include "emac/env/trace.hpp"

namespace emac::env {

/// What a UE can see when it decides at the start of a TTI.
struct UeObservation {
  int buffer_len = 0;
  int dcm = 0;  // DCM received this TTI (sent by the BS at t-1)
};

/// A complete MAC protocol: decentralized UE decisions plus the BS decision.
///
/// UEs only see their own observation; the BS only sees the channel and the
/// UCMs of the current TTI. Implementations keep whatever history they need.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual void begin_episode(const SimConfig& config, std::uint64_t seed) = 0;
  virtual std::vector<UeAction> act_ues(std::span<const UeObservation> observations) = 0;
  virtual BsAction act_bs(const BsView& view) = 0;
};

std::vector<UeObservation> observe_ues(const EnvState& state);

/// Drives one episode to completion. When `trace` is given, one row per TTI
/// is appended.
EpisodeStats run_episode(Policy& policy, const SimConfig& config, std::uint64_t seed,
                         std::vector<TraceRow>* trace = nullptr);

}  // namespace emac::env
