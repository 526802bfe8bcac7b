#include "emac/marl/history.hpp"

#include <algorithm>

#include "emac/errors.hpp"

namespace emac::marl {

namespace {

void one_hot(std::span<double> out, std::size_t offset, int width, int index) {
  if (index < 0) return;
  if (index >= width) throw UsageError("one-hot index exceeds its block");
  out[offset + static_cast<std::size_t>(index)] = 1.0;
}

template <typename Slice>
void push_front(std::deque<Slice>& window, Slice slice, int capacity) {
  window.push_front(std::move(slice));
  while (static_cast<int>(window.size()) > capacity) window.pop_back();
}

}  // namespace

AgentHistory::AgentHistory(const AgentLayout& layout)
    : layout_(layout), ues_(static_cast<std::size_t>(layout.n_ue)) {}

void AgentHistory::reset() {
  for (auto& ue : ues_) ue = UeTrack{};
  bs_.clear();
  bs_last_dcms_.clear();
}

void AgentHistory::observe_ue(int u, int buffer_len, int dcm) {
  UeTrack& ue = ues_.at(static_cast<std::size_t>(u));
  push_front(ue.slices, UeSlice{buffer_len, ue.last_action, ue.last_ucm, dcm}, layout_.slices);
}

void AgentHistory::record_ue_action(int u, int env_action, int ucm) {
  UeTrack& ue = ues_.at(static_cast<std::size_t>(u));
  ue.last_action = env_action;
  ue.last_ucm = ucm;
}

void AgentHistory::observe_bs(int channel_obs, std::span<const int> ucms) {
  push_front(bs_, BsSlice{channel_obs, {ucms.begin(), ucms.end()}, bs_last_dcms_},
             layout_.slices);
}

void AgentHistory::record_bs_action(std::span<const int> dcms) {
  bs_last_dcms_.assign(dcms.begin(), dcms.end());
}

void AgentHistory::encode_ue(int u, std::span<double> out) const {
  const AgentLayout& L = layout_;
  if (static_cast<int>(out.size()) != L.ue_state) throw ShapeError("UE state buffer size");
  std::fill(out.begin(), out.end(), 0.0);
  const UeTrack& ue = ues_.at(static_cast<std::size_t>(u));
  const int obs_width = L.buffer_capacity + 1;
  for (std::size_t j = 0; j < ue.slices.size(); ++j) {
    const UeSlice& s = ue.slices[j];
    std::size_t at = j * static_cast<std::size_t>(L.ue_slice);
    one_hot(out, at, obs_width, s.obs);
    at += static_cast<std::size_t>(obs_width);
    one_hot(out, at, env::kEnvActionCount, s.prev_action);
    at += env::kEnvActionCount;
    if (L.comm) {
      one_hot(out, at, L.ul_vocab, s.prev_ucm);
      at += static_cast<std::size_t>(L.ul_vocab);
      one_hot(out, at, L.dl_vocab, s.dcm);
    }
  }
  if (L.ue_identity) {
    one_hot(out, static_cast<std::size_t>(L.slices * L.ue_slice), L.n_ue, u);
  }
}

void AgentHistory::encode_bs(std::span<double> out) const {
  const AgentLayout& L = layout_;
  if (static_cast<int>(out.size()) != L.bs_state) throw ShapeError("BS state buffer size");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < bs_.size(); ++j) {
    const BsSlice& s = bs_[j];
    std::size_t at = j * static_cast<std::size_t>(L.bs_slice);
    one_hot(out, at, L.n_ue + 2, s.obs);
    at += static_cast<std::size_t>(L.n_ue + 2);
    if (!L.comm) continue;
    for (int u = 0; u < L.n_ue; ++u) {
      one_hot(out, at, L.ul_vocab, s.ucms[static_cast<std::size_t>(u)]);
      at += static_cast<std::size_t>(L.ul_vocab);
    }
    for (int u = 0; u < L.n_ue; ++u) {
      if (!s.prev_dcms.empty()) one_hot(out, at, L.dl_vocab, s.prev_dcms[static_cast<std::size_t>(u)]);
      at += static_cast<std::size_t>(L.dl_vocab);
    }
  }
}

std::vector<double> AgentHistory::ue_state(int u) const {
  std::vector<double> out(static_cast<std::size_t>(layout_.ue_state));
  encode_ue(u, out);
  return out;
}

std::vector<double> AgentHistory::bs_state() const {
  std::vector<double> out(static_cast<std::size_t>(layout_.bs_state));
  encode_bs(out);
  return out;
}

}  // namespace emac::marl
