#pragma once

#include <deque>
#include <span>
#include <vector>

#include "emac/marl/layout.hpp"

namespace emac::marl {

/// Rolling per-agent windows of observations, own actions and messages,
/// encoded as concatenated one-hot slices (most recent first). Slices that
/// do not exist yet encode as zeros, as do "previous action" fields at t=0.
///
/// UE slice at decision time t: buffer length o_t, previous environment
/// action and UCM (t-1), DCM received at t.
/// BS slice at decision time t: channel observation and all UCMs of TTI t,
/// plus the DCMs the BS sent at t-1.
class AgentHistory {
 public:
  explicit AgentHistory(const AgentLayout& layout);

  void reset();

  void observe_ue(int u, int buffer_len, int dcm);
  void record_ue_action(int u, int env_action, int ucm);
  void observe_bs(int channel_obs, std::span<const int> ucms);
  void record_bs_action(std::span<const int> dcms);

  /// Writes layout.ue_state values.
  void encode_ue(int u, std::span<double> out) const;
  /// Writes layout.bs_state values.
  void encode_bs(std::span<double> out) const;

  std::vector<double> ue_state(int u) const;
  std::vector<double> bs_state() const;

 private:
  struct UeSlice {
    int obs = 0;
    int prev_action = -1;
    int prev_ucm = -1;
    int dcm = 0;
  };
  struct BsSlice {
    int obs = 0;
    std::vector<int> ucms;
    std::vector<int> prev_dcms;  // empty before the first BS decision
  };
  struct UeTrack {
    std::deque<UeSlice> slices;
    int last_action = -1;
    int last_ucm = -1;
  };

  AgentLayout layout_;
  std::vector<UeTrack> ues_;
  std::deque<BsSlice> bs_;
  std::vector<int> bs_last_dcms_;
};

}  // namespace emac::marl
