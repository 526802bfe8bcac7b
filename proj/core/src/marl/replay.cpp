#include "emac/marl/replay.hpp"

#include "emac/errors.hpp"

namespace emac::marl {

namespace {

bool binary(const std::vector<double>& values) {
  for (double v : values) {
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

void pack(const std::vector<double>& values, std::uint8_t* out) {
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] == 1.0 ? 1 : 0;
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity),
      state_dim_(static_cast<std::size_t>(state_dim)),
      action_dim_(static_cast<std::size_t>(action_dim)),
      states_(capacity * state_dim_),
      actions_(capacity * action_dim_),
      next_states_(capacity * state_dim_),
      rewards_(capacity),
      dones_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
}

void ReplayBuffer::push(const Transition& tr) {
  if (tr.state.size() != state_dim_ || tr.next_state.size() != state_dim_ ||
      tr.action.size() != action_dim_) {
    throw ShapeError("transition does not match the replay layout");
  }
  if (!binary(tr.state) || !binary(tr.action) || !binary(tr.next_state)) {
    throw UsageError("replay entries must be binary");
  }
  std::size_t index;
  if (size_ < capacity_) {
    index = slot(size_);
    ++size_;
  } else {
    index = head_;  // evict the oldest
    head_ = (head_ + 1) % capacity_;
  }
  pack(tr.state, &states_[index * state_dim_]);
  pack(tr.action, &actions_[index * action_dim_]);
  pack(tr.next_state, &next_states_[index * state_dim_]);
  rewards_[index] = tr.reward;
  dones_[index] = tr.done ? 1 : 0;
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("replay index out of range");
  const std::size_t index = slot(i);
  Transition tr;
  tr.state.assign(states_.begin() + static_cast<std::ptrdiff_t>(index * state_dim_),
                  states_.begin() + static_cast<std::ptrdiff_t>((index + 1) * state_dim_));
  tr.action.assign(actions_.begin() + static_cast<std::ptrdiff_t>(index * action_dim_),
                   actions_.begin() + static_cast<std::ptrdiff_t>((index + 1) * action_dim_));
  tr.next_state.assign(next_states_.begin() + static_cast<std::ptrdiff_t>(index * state_dim_),
                       next_states_.begin() + static_cast<std::ptrdiff_t>((index + 1) * state_dim_));
  tr.reward = rewards_[index];
  tr.done = dones_[index] != 0;
  return tr;
}

Batch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (size_ == 0) throw UsageError("sampling from an empty replay buffer");
  const auto n = static_cast<Eigen::Index>(batch_size);
  Batch batch;
  batch.state.resize(static_cast<Eigen::Index>(state_dim_), n);
  batch.action.resize(static_cast<Eigen::Index>(action_dim_), n);
  batch.next_state.resize(static_cast<Eigen::Index>(state_dim_), n);
  batch.reward.resize(n);
  batch.done.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t index = slot(rng.uniform_index(size_));
    const std::uint8_t* s = &states_[index * state_dim_];
    const std::uint8_t* a = &actions_[index * action_dim_];
    const std::uint8_t* ns = &next_states_[index * state_dim_];
    for (std::size_t r = 0; r < state_dim_; ++r) {
      batch.state(static_cast<Eigen::Index>(r), j) = s[r];
      batch.next_state(static_cast<Eigen::Index>(r), j) = ns[r];
    }
    for (std::size_t r = 0; r < action_dim_; ++r) batch.action(static_cast<Eigen::Index>(r), j) = a[r];
    batch.reward(j) = rewards_[index];
    batch.done(j) = dones_[index];
  }
  return batch;
}

}  // namespace emac::marl
