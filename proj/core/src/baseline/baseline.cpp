#include "emac/baseline/baseline.hpp"

#include "emac/errors.hpp"

namespace emac::baseline {

void MessageMap::check_fits(const env::SimConfig& config) {
  if (config.ul_vocab < 2 || config.dl_vocab < 3) {
    throw ConfigError("contention-free baseline needs |U| >= 2 and |D| >= 3");
  }
}

env::UeAction baseline_ue_policy(int buffer_len, int last_dcm) {
  env::UeAction action;
  action.ucm = buffer_len > 0 ? MessageMap::kUcmSr : MessageMap::kUcmNull;
  if (buffer_len > 0) {
    if (last_dcm == MessageMap::kDcmSg) action.env_action = env::EnvAction::Transmit;
    if (last_dcm == MessageMap::kDcmAck) action.env_action = env::EnvAction::Delete;
  }
  return action;
}

env::BsAction baseline_bs_policy(int outcome_obs, std::span<const int> ucms, Rng& rng) {
  const int n_ue = static_cast<int>(ucms.size());
  env::BsAction action;
  action.dcm.assign(ucms.size(), MessageMap::kDcmNull);

  const int decoded = (outcome_obs >= 1 && outcome_obs <= n_ue) ? outcome_obs - 1 : -1;
  if (decoded >= 0) action.dcm[static_cast<std::size_t>(decoded)] = MessageMap::kDcmAck;

  std::vector<int> requesters;
  for (int u = 0; u < n_ue; ++u) {
    if (u != decoded && ucms[static_cast<std::size_t>(u)] == MessageMap::kUcmSr) {
      requesters.push_back(u);
    }
  }
  if (!requesters.empty()) {
    const std::size_t pick = requesters.size() == 1 ? 0 : rng.uniform_index(requesters.size());
    action.dcm[static_cast<std::size_t>(requesters[pick])] = MessageMap::kDcmSg;
  }
  return action;
}

void ContentionFreePolicy::begin_episode(const env::SimConfig& config, std::uint64_t seed) {
  MessageMap::check_fits(config);
  grant_rng_ = Rng(seed, kGrantStream);
}

std::vector<env::UeAction> ContentionFreePolicy::act_ues(
    std::span<const env::UeObservation> observations) {
  std::vector<env::UeAction> actions;
  actions.reserve(observations.size());
  for (const auto& obs : observations) actions.push_back(baseline_ue_policy(obs.buffer_len, obs.dcm));
  return actions;
}

env::BsAction ContentionFreePolicy::act_bs(const env::BsView& view) {
  return baseline_bs_policy(view.observation, view.ucms, grant_rng_);
}

env::EpisodeStats run_baseline_episode(const env::SimConfig& config, std::uint64_t seed,
                                       std::vector<env::TraceRow>* trace) {
  ContentionFreePolicy policy;
  return env::run_episode(policy, config, seed, trace);
}

}  // namespace emac::baseline
