#pragma once

#include <string>
#include <string_view>

namespace emac::marl {

enum class Ablation {
  Full,    // centralized critics plus control-message channels
  NoComm,  // no UCM/DCM: message blocks and heads removed
  Ddpg,    // critics see only their own agent's state and action
};

std::string_view to_string(Ablation ablation);
/// Accepts "full", "nocomm", "ddpg". Throws ConfigError otherwise.
Ablation parse_ablation(std::string_view text);

/// Learner hyperparameters. Defaults reproduce the reference training setup.
struct TrainConfig {
  int memory_length = 3;          // history slices per agent state
  bool memory_inclusive = false;  // true: slices t..t-k, i.e. memory_length + 1 slices
  int replay_capacity = 100000;
  int batch_size = 1024;
  int update_interval = 96;       // environment steps between update rounds
  double learning_rate = 1e-3;
  double discount = 0.99;
  double policy_reg = 1e-3;
  double gumbel_temperature = 1.0;
  double soft_update = 1e-3;
  int hidden_units = 64;
  int episodes_train = 300000;
  int episodes_eval = 500;
  int episodes_test = 5000;
  int eval_interval = 5000;       // training episodes between evaluation rounds
  bool ue_identity = false;       // append a UE index one-hot to the shared UE actor input
  Ablation ablation = Ablation::Full;

  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

}  // namespace emac::marl
