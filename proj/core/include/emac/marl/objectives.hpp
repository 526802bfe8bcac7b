#pragma once

#include <span>

#include <Eigen/Core>

#include "emac/nn/mlp.hpp"

namespace emac::marl {

/// Columnwise one-hot of the argmax within each head segment.
Eigen::MatrixXd greedy_one_hot(const Eigen::MatrixXd& logits, std::span<const int> heads);

/// Columnwise softmax((logits + noise) / temperature) within each head segment.
Eigen::MatrixXd head_gumbel_softmax(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& noise,
                                    std::span<const int> heads, double temperature);

/// Pulls a gradient with respect to head probabilities back to the logits.
Eigen::MatrixXd head_softmax_backward(const Eigen::MatrixXd& probs,
                                      const Eigen::MatrixXd& grad_probs,
                                      std::span<const int> heads, double temperature);

/// y = r + discount * (1 - done) * next_q
Eigen::VectorXd td_targets(const Eigen::VectorXd& rewards, const Eigen::VectorXd& done,
                           const Eigen::VectorXd& next_q, double discount);

struct CriticObjective {
  double loss = 0.0;  // mean squared TD error
  nn::MlpGrads grads;
};

CriticObjective critic_objective(const nn::Mlp& critic, const Eigen::MatrixXd& inputs,
                                 const Eigen::VectorXd& targets);

struct ActorObjective {
  double loss = 0.0;         // -mean_q + policy_reg * regularizer
  double mean_q = 0.0;
  double regularizer = 0.0;  // mean squared logit
  nn::MlpGrads grads;
};

/// Deterministic policy-gradient loss for one actor.
///
/// Column j of `states` is fed through the actor; its per-head Gumbel-softmax
/// relaxation (with the given noise) is written into `critic_inputs` at rows
/// [slot_rows[j], slot_rows[j] + action_dim) and the critic is evaluated. The
/// remaining critic inputs (other agents' actions) stay as given. Gradients
/// flow critic -> relaxed action -> logits -> actor parameters, plus the
/// squared-logit penalty.
ActorObjective actor_objective(const nn::Mlp& actor, const nn::Mlp& critic,
                               const Eigen::MatrixXd& states, Eigen::MatrixXd critic_inputs,
                               std::span<const Eigen::Index> slot_rows,
                               const Eigen::MatrixXd& noise, std::span<const int> heads,
                               double temperature, double policy_reg);

}  // namespace emac::marl
