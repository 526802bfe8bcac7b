#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "emac/env/types.hpp"
#include "emac/marl/config.hpp"
#include "emac/marl/learner.hpp"

namespace emac::marl {

/// Sub-streams derived from a run seed.
enum Stream : std::uint64_t {
  kInitStream = 1,
  kTrainEpisodeStream = 2,
  kExploreStream = 3,
  kUpdateStream = 4,
  kEvalStream = 5,
  kTestStream = 6,
};

/// `count` episode seeds drawn from Rng(seed, stream).
std::vector<std::uint64_t> episode_seeds(std::uint64_t seed, std::uint64_t stream,
                                         std::size_t count);

/// Greedy evaluation on the fixed evaluation seed set after `train_episode`
/// training episodes.
struct EvalPoint {
  int train_episode = 0;
  double mean_goodput = 0.0;
  double mean_delivery_rate = 0.0;
  double mean_duration = 0.0;

  bool operator==(const EvalPoint&) const = default;
};

struct TrainResult {
  ActorCritic nets;
  std::vector<EvalPoint> eval_trace;
  std::vector<std::uint64_t> eval_seeds;
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
};

using EvalObserver = std::function<void(const EvalPoint&)>;

/// Trains for episodes_train episodes. Every update_interval environment
/// steps (once the replay holds a batch) one update round runs. Evaluation
/// happens before training, every eval_interval episodes and at the end.
TrainResult train_run(const env::SimConfig& sim, const TrainConfig& train, std::uint64_t seed,
                      const EvalObserver& observer = {});

}  // namespace emac::marl
