#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "emac/rng.hpp"

namespace emac::marl {

/// Joint transition (x, a, r, x', done). States and actions are one-hot
/// encodings, so every entry is 0 or 1.
struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;

  bool operator==(const Transition&) const = default;
};

/// Column-major batch: one column per sampled transition.
struct Batch {
  Eigen::MatrixXd state;
  Eigen::MatrixXd action;
  Eigen::VectorXd reward;
  Eigen::MatrixXd next_state;
  Eigen::VectorXd done;

  Eigen::Index size() const { return reward.size(); }
};

/// Fixed-capacity FIFO ring of transitions with uniform sampling (with
/// replacement). Binary entries are packed into bytes.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);

  /// Throws ShapeError on wrong lengths, UsageError on non-binary entries.
  void push(const Transition& transition);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  /// i-th retained transition in insertion order (0 is the oldest).
  Transition at(std::size_t i) const;

  Batch sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t slot(std::size_t i) const { return (head_ + i) % capacity_; }

  std::size_t capacity_;
  std::size_t state_dim_;
  std::size_t action_dim_;
  std::size_t head_ = 0;  // oldest entry
  std::size_t size_ = 0;
  std::vector<std::uint8_t> states_;
  std::vector<std::uint8_t> actions_;
  std::vector<std::uint8_t> next_states_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

}  // namespace emac::marl
