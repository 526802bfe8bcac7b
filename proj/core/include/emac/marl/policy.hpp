#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emac/env/episode.hpp"
#include "emac/marl/history.hpp"
#include "emac/marl/learner.hpp"

namespace emac::marl {

enum class ActionMode {
  Explore,  // argmax of a Gumbel-softmax sample per head
  Greedy,   // argmax of the raw logits
};

/// Chosen index per head. `rng` is only used (and required) in Explore mode.
std::vector<int> select_actions(const nn::Mlp& actor, std::span<const double> state,
                                std::span<const int> heads, ActionMode mode, double temperature,
                                Rng* rng);

/// Writes the one-hot encoding of `choice` (one index per head) into `out`.
void write_one_hot(std::span<const int> heads, std::span<const int> choice, std::span<double> out);

/// Decentralized execution of the learned actors. Each UE runs the shared UE
/// actor on its own history; the BS runs its actor on the channel/UCM history.
///
/// After every TTI the joint state and executed joint action of that TTI are
/// available for replay storage.
class ActorPolicy final : public env::Policy {
 public:
  ActorPolicy(const ActorCritic& nets, ActionMode mode, double temperature = 1.0,
              std::uint64_t exploration_seed = 0);

  void begin_episode(const env::SimConfig& config, std::uint64_t seed) override;
  std::vector<env::UeAction> act_ues(std::span<const env::UeObservation> observations) override;
  env::BsAction act_bs(const env::BsView& view) override;

  const std::vector<double>& joint_state() const { return joint_state_; }
  const std::vector<double>& joint_action() const { return joint_action_; }

 private:
  const ActorCritic* nets_;
  AgentHistory history_;
  ActionMode mode_;
  double temperature_;
  Rng rng_;
  std::vector<double> joint_state_;
  std::vector<double> joint_action_;
};

struct EvalSummary {
  std::vector<env::EpisodeStats> episodes;
  double mean_goodput = 0.0;
  double mean_delivery_rate = 0.0;
  double mean_duration = 0.0;
};

/// Rolls out `policy` once per seed and aggregates G, delivery rate and N_TTIs.
EvalSummary evaluate(env::Policy& policy, const env::SimConfig& sim,
                     std::span<const std::uint64_t> seeds);

/// Greedy rollouts of the actors; leaves `nets` untouched.
EvalSummary evaluate(const ActorCritic& nets, const env::SimConfig& sim,
                     std::span<const std::uint64_t> seeds);

}  // namespace emac::marl
