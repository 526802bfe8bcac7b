#include "emac/marl/layout.hpp"

#include <numeric>

#include "emac/errors.hpp"

namespace emac::marl {

std::string_view to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::Full:
      return "full";
    case Ablation::NoComm:
      return "nocomm";
    case Ablation::Ddpg:
      return "ddpg";
  }
  return "full";
}

Ablation parse_ablation(std::string_view text) {
  if (text == "full") return Ablation::Full;
  if (text == "nocomm") return Ablation::NoComm;
  if (text == "ddpg") return Ablation::Ddpg;
  throw ConfigError("unknown ablation '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(memory_length >= 1, "memory_length must be >= 1");
  require(replay_capacity >= 1, "replay_capacity must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(batch_size <= replay_capacity, "batch_size must not exceed replay_capacity");
  require(update_interval >= 1, "update_interval must be >= 1");
  require(learning_rate >= 0.0, "learning_rate must be >= 0");
  require(discount > 0.0 && discount <= 1.0, "discount must lie in (0, 1]");
  require(policy_reg >= 0.0, "policy_reg must be >= 0");
  require(gumbel_temperature > 0.0, "gumbel_temperature must be > 0");
  require(soft_update >= 0.0 && soft_update <= 1.0, "soft_update must lie in [0, 1]");
  require(hidden_units >= 1, "hidden_units must be >= 1");
  require(episodes_train >= 0, "episodes_train must be >= 0");
  require(episodes_eval >= 1, "episodes_eval must be >= 1");
  require(episodes_test >= 1, "episodes_test must be >= 1");
  require(eval_interval >= 1, "eval_interval must be >= 1");
}

int AgentLayout::ue_critic_input() const {
  return centralized ? joint_state() + joint_action() : ue_state + ue_action;
}

int AgentLayout::bs_critic_input() const {
  return centralized ? joint_state() + joint_action() : bs_state + bs_action;
}

AgentLayout make_layout(const env::SimConfig& sim, const TrainConfig& train) {
  sim.validate();
  train.validate();
  AgentLayout layout;
  layout.n_ue = sim.n_ue;
  layout.slices = train.memory_length + (train.memory_inclusive ? 1 : 0);
  layout.comm = train.ablation != Ablation::NoComm;
  layout.centralized = train.ablation != Ablation::Ddpg;
  layout.ue_identity = train.ue_identity;
  layout.buffer_capacity = sim.buffer_capacity;
  layout.ul_vocab = sim.ul_vocab;
  layout.dl_vocab = sim.dl_vocab;

  layout.ue_slice = (sim.buffer_capacity + 1) + env::kEnvActionCount;
  layout.bs_slice = sim.n_ue + 2;
  layout.ue_heads = {env::kEnvActionCount};
  if (layout.comm) {
    layout.ue_slice += sim.ul_vocab + sim.dl_vocab;
    layout.bs_slice += sim.n_ue * sim.ul_vocab + sim.n_ue * sim.dl_vocab;
    layout.ue_heads.push_back(sim.ul_vocab);
    layout.bs_heads.assign(static_cast<std::size_t>(sim.n_ue), sim.dl_vocab);
  }
  layout.ue_state = layout.slices * layout.ue_slice + (layout.ue_identity ? sim.n_ue : 0);
  layout.bs_state = layout.slices * layout.bs_slice;
  layout.ue_action = std::accumulate(layout.ue_heads.begin(), layout.ue_heads.end(), 0);
  layout.bs_action = std::accumulate(layout.bs_heads.begin(), layout.bs_heads.end(), 0);
  return layout;
}

}  // namespace emac::marl
