#include "emac/marl/objectives.hpp"

#include <cmath>
#include <numeric>

#include "emac/errors.hpp"

namespace emac::marl {

namespace {

Eigen::Index total(std::span<const int> heads) {
  return std::accumulate(heads.begin(), heads.end(), Eigen::Index{0});
}

}  // namespace

Eigen::MatrixXd greedy_one_hot(const Eigen::MatrixXd& logits, std::span<const int> heads) {
  if (logits.rows() != total(heads)) throw ShapeError("logits do not match head sizes");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    Eigen::Index at = 0;
    for (int width : heads) {
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < width; ++k) {
        if (logits(at + k, j) > logits(at + best, j)) best = k;
      }
      out(at + best, j) = 1.0;
      at += width;
    }
  }
  return out;
}

Eigen::MatrixXd head_gumbel_softmax(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& noise,
                                    std::span<const int> heads, double temperature) {
  if (logits.rows() != total(heads) || noise.rows() != logits.rows() ||
      noise.cols() != logits.cols()) {
    throw ShapeError("logits/noise do not match head sizes");
  }
  Eigen::MatrixXd probs = (logits + noise) / temperature;
  Eigen::Index at = 0;
  for (int width : heads) {
    auto block = probs.middleRows(at, width);
    const Eigen::RowVectorXd peak = block.colwise().maxCoeff();
    block.rowwise() -= peak;
    block = block.array().exp();
    const Eigen::RowVectorXd sums = block.colwise().sum();
    block.array().rowwise() /= sums.array();
    at += width;
  }
  return probs;
}

Eigen::MatrixXd head_softmax_backward(const Eigen::MatrixXd& probs,
                                      const Eigen::MatrixXd& grad_probs,
                                      std::span<const int> heads, double temperature) {
  Eigen::MatrixXd grad_logits(probs.rows(), probs.cols());
  Eigen::Index at = 0;
  for (int width : heads) {
    const auto y = probs.middleRows(at, width);
    const auto dy = grad_probs.middleRows(at, width);
    const Eigen::RowVectorXd inner = y.cwiseProduct(dy).colwise().sum();
    Eigen::MatrixXd centered = dy;
    centered.rowwise() -= inner;
    grad_logits.middleRows(at, width) = y.cwiseProduct(centered) / temperature;
    at += width;
  }
  return grad_logits;
}

Eigen::VectorXd td_targets(const Eigen::VectorXd& rewards, const Eigen::VectorXd& done,
                           const Eigen::VectorXd& next_q, double discount) {
  if (done.size() != rewards.size() || next_q.size() != rewards.size()) {
    throw ShapeError("td_targets: length mismatch");
  }
  return rewards.array() + discount * (1.0 - done.array()) * next_q.array();
}

CriticObjective critic_objective(const nn::Mlp& critic, const Eigen::MatrixXd& inputs,
                                 const Eigen::VectorXd& targets) {
  if (critic.output_dim() != 1) throw ShapeError("critic must have a scalar output");
  if (targets.size() != inputs.cols()) throw ShapeError("one target per critic input expected");
  auto fw = nn::forward(critic, inputs);
  const Eigen::RowVectorXd diff = fw.output.row(0) - targets.transpose();
  const auto m = static_cast<double>(inputs.cols());
  CriticObjective obj;
  obj.loss = diff.squaredNorm() / m;
  obj.grads = nn::backward(critic, fw.cache, (2.0 / m) * diff).params;
  return obj;
}

ActorObjective actor_objective(const nn::Mlp& actor, const nn::Mlp& critic,
                               const Eigen::MatrixXd& states, Eigen::MatrixXd critic_inputs,
                               std::span<const Eigen::Index> slot_rows,
                               const Eigen::MatrixXd& noise, std::span<const int> heads,
                               double temperature, double policy_reg) {
  const Eigen::Index m = states.cols();
  const Eigen::Index action_dim = actor.output_dim();
  if (critic_inputs.cols() != m || static_cast<Eigen::Index>(slot_rows.size()) != m) {
    throw ShapeError("actor_objective: one critic input and slot per sample expected");
  }
  if (critic.output_dim() != 1) throw ShapeError("critic must have a scalar output");

  auto actor_fw = nn::forward(actor, states);
  const Eigen::MatrixXd& logits = actor_fw.output;
  const Eigen::MatrixXd probs = head_gumbel_softmax(logits, noise, heads, temperature);
  for (Eigen::Index j = 0; j < m; ++j) {
    critic_inputs.block(slot_rows[static_cast<std::size_t>(j)], j, action_dim, 1) = probs.col(j);
  }

  auto critic_fw = nn::forward(critic, critic_inputs);
  const auto count = static_cast<double>(m);
  const auto logit_count = static_cast<double>(logits.size());

  ActorObjective obj;
  obj.mean_q = critic_fw.output.row(0).sum() / count;
  obj.regularizer = logits.squaredNorm() / logit_count;
  obj.loss = -obj.mean_q + policy_reg * obj.regularizer;

  const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, m, -1.0 / count);
  const Eigen::MatrixXd input_grad = nn::backward_input(critic, critic_fw.cache, dq);
  Eigen::MatrixXd grad_probs(action_dim, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    grad_probs.col(j) = input_grad.block(slot_rows[static_cast<std::size_t>(j)], j, action_dim, 1);
  }
  Eigen::MatrixXd grad_logits = head_softmax_backward(probs, grad_probs, heads, temperature);
  grad_logits += (2.0 * policy_reg / logit_count) * logits;
  obj.grads = nn::backward(actor, actor_fw.cache, grad_logits).params;
  return obj;
}

}  // namespace emac::marl
