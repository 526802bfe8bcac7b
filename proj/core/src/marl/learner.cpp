#include "emac/marl/learner.hpp"

#include <vector>

#include "emac/errors.hpp"

namespace emac::marl {

namespace {

RoleNets make_role(int state_dim, int action_dim, int critic_input, int hidden, Rng& rng) {
  const std::vector<int> actor_dims{state_dim, hidden, hidden, action_dim};
  const std::vector<int> critic_dims{critic_input, hidden, hidden, 1};
  RoleNets nets;
  nets.actor = nn::init_mlp(actor_dims, rng);
  nets.critic = nn::init_mlp(critic_dims, rng);
  nets.target_actor = nets.actor;
  nets.target_critic = nets.critic;
  nets.actor_opt = nn::make_adam_state(nets.actor);
  nets.critic_opt = nn::make_adam_state(nets.critic);
  return nets;
}

Eigen::VectorXd tile(const Eigen::VectorXd& v, int copies) {
  return v.replicate(copies, 1);
}

Eigen::MatrixXd gumbel_noise(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd noise(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) noise(i, j) = rng.gumbel();
  }
  return noise;
}

}  // namespace

ActorCritic make_actor_critic(const AgentLayout& layout, int hidden, Rng& rng) {
  ActorCritic nets;
  nets.layout = layout;
  nets.ue = make_role(layout.ue_state, layout.ue_action, layout.ue_critic_input(), hidden, rng);
  if (layout.has_bs_agent()) {
    nets.bs = make_role(layout.bs_state, layout.bs_action, layout.bs_critic_input(), hidden, rng);
  }
  return nets;
}

int critic_copies(const AgentLayout& layout, Role role) {
  return (!layout.centralized && role == Role::Ue) ? layout.n_ue : 1;
}

Eigen::MatrixXd critic_inputs(const AgentLayout& L, Role role, const Eigen::MatrixXd& state,
                              const Eigen::MatrixXd& action) {
  const Eigen::Index b = state.cols();
  if (state.rows() != L.joint_state() || action.rows() != L.joint_action() || action.cols() != b) {
    throw ShapeError("critic_inputs: joint state/action shape mismatch");
  }
  if (L.centralized) {
    Eigen::MatrixXd in(L.joint_state() + L.joint_action(), b);
    in.topRows(L.joint_state()) = state;
    in.bottomRows(L.joint_action()) = action;
    return in;
  }
  if (role == Role::Ue) {
    Eigen::MatrixXd in(L.ue_state + L.ue_action, L.n_ue * b);
    for (int u = 0; u < L.n_ue; ++u) {
      in.block(0, u * b, L.ue_state, b) = state.middleRows(L.ue_state_offset(u), L.ue_state);
      in.block(L.ue_state, u * b, L.ue_action, b) =
          action.middleRows(L.ue_action_offset(u), L.ue_action);
    }
    return in;
  }
  Eigen::MatrixXd in(L.bs_state + L.bs_action, b);
  in.topRows(L.bs_state) = state.middleRows(L.bs_state_offset(), L.bs_state);
  in.bottomRows(L.bs_action) = action.middleRows(L.bs_action_offset(), L.bs_action);
  return in;
}

Eigen::MatrixXd target_joint_action(const ActorCritic& nets, const Eigen::MatrixXd& next_state) {
  const AgentLayout& L = nets.layout;
  Eigen::MatrixXd action = Eigen::MatrixXd::Zero(L.joint_action(), next_state.cols());
  for (int u = 0; u < L.n_ue; ++u) {
    const Eigen::MatrixXd logits =
        nn::predict(nets.ue.target_actor, next_state.middleRows(L.ue_state_offset(u), L.ue_state));
    action.middleRows(L.ue_action_offset(u), L.ue_action) = greedy_one_hot(logits, L.ue_heads);
  }
  if (nets.bs) {
    const Eigen::MatrixXd logits =
        nn::predict(nets.bs->target_actor, next_state.middleRows(L.bs_state_offset(), L.bs_state));
    action.middleRows(L.bs_action_offset(), L.bs_action) = greedy_one_hot(logits, L.bs_heads);
  }
  return action;
}

double critic_update(const Batch& batch, ActorCritic& nets, Role role, const TrainConfig& config,
                     const Eigen::MatrixXd& target_actions) {
  const AgentLayout& L = nets.layout;
  RoleNets& r = nets.role(role);
  const int copies = critic_copies(L, role);
  const Eigen::MatrixXd inputs = critic_inputs(L, role, batch.state, batch.action);
  const Eigen::MatrixXd next_inputs = critic_inputs(L, role, batch.next_state, target_actions);
  const Eigen::VectorXd next_q = nn::predict(r.target_critic, next_inputs).row(0).transpose();
  const Eigen::VectorXd targets =
      td_targets(tile(batch.reward, copies), tile(batch.done, copies), next_q, config.discount);
  CriticObjective obj = critic_objective(r.critic, inputs, targets);
  nn::adam_step(r.critic, obj.grads, r.critic_opt, {.learning_rate = config.learning_rate});
  return obj.loss;
}

ActorObjective actor_update(const Batch& batch, ActorCritic& nets, Role role,
                            const TrainConfig& config, Rng& rng) {
  const AgentLayout& L = nets.layout;
  RoleNets& r = nets.role(role);
  const Eigen::Index b = batch.size();

  Eigen::MatrixXd states;
  Eigen::MatrixXd inputs;
  std::vector<Eigen::Index> slots;
  std::span<const int> heads;
  if (role == Role::Ue) {
    heads = L.ue_heads;
    states.resize(L.ue_state, L.n_ue * b);
    for (int u = 0; u < L.n_ue; ++u) {
      states.middleCols(u * b, b) = batch.state.middleRows(L.ue_state_offset(u), L.ue_state);
    }
    if (L.centralized) {
      inputs = critic_inputs(L, role, batch.state, batch.action).replicate(1, L.n_ue);
      for (int u = 0; u < L.n_ue; ++u) {
        slots.insert(slots.end(), static_cast<std::size_t>(b),
                     L.joint_state() + L.ue_action_offset(u));
      }
    } else {
      inputs = critic_inputs(L, role, batch.state, batch.action);
      slots.assign(static_cast<std::size_t>(L.n_ue * b), L.ue_state);
    }
  } else {
    heads = L.bs_heads;
    states = batch.state.middleRows(L.bs_state_offset(), L.bs_state);
    inputs = critic_inputs(L, role, batch.state, batch.action);
    slots.assign(static_cast<std::size_t>(b),
                 L.centralized ? L.joint_state() + L.bs_action_offset() : Eigen::Index{L.bs_state});
  }

  const Eigen::MatrixXd noise = gumbel_noise(r.actor.output_dim(), states.cols(), rng);
  ActorObjective obj = actor_objective(r.actor, r.critic, states, std::move(inputs), slots, noise,
                                       heads, config.gumbel_temperature, config.policy_reg);
  nn::adam_step(r.actor, obj.grads, r.actor_opt, {.learning_rate = config.learning_rate});
  return obj;
}

void soft_update_targets(ActorCritic& nets, double tau) {
  nn::soft_update(nets.ue.target_actor, nets.ue.actor, tau);
  nn::soft_update(nets.ue.target_critic, nets.ue.critic, tau);
  if (nets.bs) {
    nn::soft_update(nets.bs->target_actor, nets.bs->actor, tau);
    nn::soft_update(nets.bs->target_critic, nets.bs->critic, tau);
  }
}

UpdateStats update_round(const Batch& batch, ActorCritic& nets, const TrainConfig& config,
                         Rng& rng) {
  UpdateStats stats;
  const Eigen::MatrixXd target_actions = target_joint_action(nets, batch.next_state);
  stats.ue_critic_loss = critic_update(batch, nets, Role::Ue, config, target_actions);
  if (nets.bs) stats.bs_critic_loss = critic_update(batch, nets, Role::Bs, config, target_actions);
  stats.ue_actor_loss = actor_update(batch, nets, Role::Ue, config, rng).loss;
  if (nets.bs) stats.bs_actor_loss = actor_update(batch, nets, Role::Bs, config, rng).loss;
  soft_update_targets(nets, config.soft_update);
  return stats;
}

std::optional<UpdateStats> maybe_update(const ReplayBuffer& replay, ActorCritic& nets,
                                        const TrainConfig& config, Rng& rng) {
  if (replay.size() < static_cast<std::size_t>(config.batch_size)) return std::nullopt;
  const Batch batch = replay.sample(static_cast<std::size_t>(config.batch_size), rng);
  return update_round(batch, nets, config, rng);
}

}  // namespace emac::marl
