#pragma once

#include <optional>

#include <Eigen/Core>

#include "emac/marl/config.hpp"
#include "emac/marl/layout.hpp"
#include "emac/marl/objectives.hpp"
#include "emac/marl/replay.hpp"
#include "emac/nn/adam.hpp"
#include "emac/nn/mlp.hpp"

namespace emac::marl {

enum class Role { Ue, Bs };

/// Online and target networks of one agent role, with optimizer state.
struct RoleNets {
  nn::Mlp actor;
  nn::Mlp critic;
  nn::Mlp target_actor;
  nn::Mlp target_critic;
  nn::AdamState actor_opt;
  nn::AdamState critic_opt;
};

/// All learnable parameters. The UEs share one RoleNets; the BS has its own
/// unless the ablation leaves it without actions.
struct ActorCritic {
  AgentLayout layout;
  RoleNets ue;
  std::optional<RoleNets> bs;

  const RoleNets& role(Role r) const { return r == Role::Ue ? ue : *bs; }
  RoleNets& role(Role r) { return r == Role::Ue ? ue : *bs; }
};

/// Actors (state -> logits) and critics (critic input -> Q) with two hidden
/// layers of `hidden` units; targets start as exact copies.
ActorCritic make_actor_critic(const AgentLayout& layout, int hidden, Rng& rng);

/// Critic inputs built from joint states/actions. Centralized: [x; a], one
/// column per transition. DDPG: each agent's own [s; a]; for the UE role the
/// N UEs are stacked as N column blocks.
Eigen::MatrixXd critic_inputs(const AgentLayout& layout, Role role, const Eigen::MatrixXd& state,
                              const Eigen::MatrixXd& action);

/// Number of critic samples one transition contributes for `role`.
int critic_copies(const AgentLayout& layout, Role role);

/// Greedy one-hot actions of the target actors at the next joint states.
Eigen::MatrixXd target_joint_action(const ActorCritic& nets, const Eigen::MatrixXd& next_state);

/// One Adam step on the role's critic towards r + discount * Q'(x', a').
double critic_update(const Batch& batch, ActorCritic& nets, Role role, const TrainConfig& config,
                     const Eigen::MatrixXd& target_actions);

/// One Adam step on the role's actor; Gumbel noise is drawn from `rng`.
ActorObjective actor_update(const Batch& batch, ActorCritic& nets, Role role,
                            const TrainConfig& config, Rng& rng);

void soft_update_targets(ActorCritic& nets, double tau);

struct UpdateStats {
  double ue_critic_loss = 0.0;
  double bs_critic_loss = 0.0;
  double ue_actor_loss = 0.0;
  double bs_actor_loss = 0.0;
};

/// Critics, then actors, then soft target updates, all on one batch.
UpdateStats update_round(const Batch& batch, ActorCritic& nets, const TrainConfig& config, Rng& rng);

/// Samples and runs update_round, or returns nullopt while the replay holds
/// fewer than batch_size transitions.
std::optional<UpdateStats> maybe_update(const ReplayBuffer& replay, ActorCritic& nets,
                                        const TrainConfig& config, Rng& rng);

}  // namespace emac::marl
