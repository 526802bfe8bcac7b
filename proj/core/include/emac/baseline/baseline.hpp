#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emac/env/episode.hpp"
#include "emac/rng.hpp"

namespace emac::baseline {

/// Fixed meaning of the control symbols in the contention-free protocol.
struct MessageMap {
  static constexpr int kUcmNull = 0;
  static constexpr int kUcmSr = 1;
  static constexpr int kDcmNull = 0;
  static constexpr int kDcmSg = 1;
  static constexpr int kDcmAck = 2;

  /// Throws ConfigError if the vocabularies cannot hold the symbols above.
  static void check_fits(const env::SimConfig& config);
};

/// Sub-stream of the episode seed used for the BS's random grant choice, so
/// arrivals and erasures match learned runs on the same seed.
inline constexpr std::uint64_t kGrantStream = 0x5347;

/// Request while the buffer is non-empty; transmit on SG; delete on ACK.
env::UeAction baseline_ue_policy(int buffer_len, int last_dcm);

/// ACK the decoded UE (ignoring its SR), then grant one of the remaining
/// requesters uniformly at random.
env::BsAction baseline_bs_policy(int outcome_obs, std::span<const int> ucms, Rng& rng);

class ContentionFreePolicy final : public env::Policy {
 public:
  void begin_episode(const env::SimConfig& config, std::uint64_t seed) override;
  std::vector<env::UeAction> act_ues(std::span<const env::UeObservation> observations) override;
  env::BsAction act_bs(const env::BsView& view) override;

 private:
  Rng grant_rng_;
};

env::EpisodeStats run_baseline_episode(const env::SimConfig& config, std::uint64_t seed,
                                       std::vector<env::TraceRow>* trace = nullptr);

}  // namespace emac::baseline
