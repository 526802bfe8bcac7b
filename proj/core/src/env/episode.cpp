#include "emac/env/episode.hpp"

namespace emac::env {

std::vector<UeObservation> observe_ues(const EnvState& state) {
  std::vector<UeObservation> obs(static_cast<std::size_t>(state.config.n_ue));
  for (int u = 0; u < state.config.n_ue; ++u) {
    obs[static_cast<std::size_t>(u)] = {ue_observation(state, u),
                                        state.pending_dcm[static_cast<std::size_t>(u)]};
  }
  return obs;
}

EpisodeStats run_episode(Policy& policy, const SimConfig& config, std::uint64_t seed,
                         std::vector<TraceRow>* trace) {
  EnvState state = new_episode(config, seed);
  policy.begin_episode(config, seed);
  const BsActionProvider provider = [&policy](const BsView& view) { return policy.act_bs(view); };

  bool done = episode_done(state);
  while (!done) {
    const auto obs = observe_ues(state);
    const auto actions = policy.act_ues(obs);
    const int t = state.t;
    StepResult result = step(state, actions, provider);
    done = result.done;

    if (trace) {
      TraceRow row;
      row.t = t;
      for (std::size_t u = 0; u < obs.size(); ++u) {
        row.obs.push_back(obs[u].buffer_len);
        row.action.push_back(static_cast<int>(actions[u].env_action));
        row.ucm.push_back(actions[u].ucm);
      }
      row.dcm = result.info.dcm;
      row.channel = result.bs_observation;
      row.new_rx = result.info.events.new_sdu_received ? 1 : 0;
      row.wrongful_deletions = result.info.events.wrongful_deletions;
      row.reward = result.reward;
      trace->push_back(std::move(row));
    }
  }
  return state.stats;
}

}  // namespace emac::env
