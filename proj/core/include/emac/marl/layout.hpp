#pragma once

#include <vector>

#include <Eigen/Core>

#include "emac/env/types.hpp"
#include "emac/marl/config.hpp"

namespace emac::marl {

/// Dimensions of every agent state, action head and critic input.
///
/// Joint vectors are ordered UE 1..N then the BS. A UE action is its
/// environment-action one-hot followed by its UCM one-hot; the BS action is
/// one DCM one-hot per UE. Without communication the UE has a single head and
/// the BS has none (it only contributes its channel history to the joint state).
struct AgentLayout {
  int n_ue = 0;
  int slices = 0;
  bool comm = true;
  bool centralized = true;
  bool ue_identity = false;

  int buffer_capacity = 0;
  int ul_vocab = 0;
  int dl_vocab = 0;

  int ue_slice = 0;
  int ue_state = 0;
  int bs_slice = 0;
  int bs_state = 0;

  std::vector<int> ue_heads;
  std::vector<int> bs_heads;
  int ue_action = 0;
  int bs_action = 0;

  bool has_bs_agent() const { return bs_action > 0; }
  int joint_state() const { return n_ue * ue_state + bs_state; }
  int joint_action() const { return n_ue * ue_action + bs_action; }
  Eigen::Index ue_state_offset(int u) const { return Eigen::Index{u} * ue_state; }
  Eigen::Index bs_state_offset() const { return Eigen::Index{n_ue} * ue_state; }
  Eigen::Index ue_action_offset(int u) const { return Eigen::Index{u} * ue_action; }
  Eigen::Index bs_action_offset() const { return Eigen::Index{n_ue} * ue_action; }

  int ue_critic_input() const;
  int bs_critic_input() const;
};

AgentLayout make_layout(const env::SimConfig& sim, const TrainConfig& train);

}  // namespace emac::marl
