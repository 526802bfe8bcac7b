#include "emac/env/environment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "emac/errors.hpp"

namespace emac::env {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void require(bool condition, const char* message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace

void SimConfig::validate() const {
  require(n_ue >= 1, "n_ue must be >= 1");
  require(buffer_capacity >= 1, "buffer_capacity must be >= 1");
  require(total_sdus >= 1, "total_sdus must be >= 1");
  require(is_probability(p_arrival), "p_arrival must lie in [0, 1]");
  require(is_probability(tbler), "tbler must lie in [0, 1]");
  require(dl_vocab >= 1, "dl_vocab must be >= 1");
  require(ul_vocab >= 1, "ul_vocab must be >= 1");
  require(max_steps >= 1, "max_steps must be >= 1");
  require(reward_param >= 1, "reward_param must be >= 1");
}

SimConfig reference_config() { return SimConfig{}; }

EnvState new_episode(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  EnvState state;
  state.config = config;
  const auto n = static_cast<std::size_t>(config.n_ue);
  state.buffers.resize(n);
  state.generated_count.assign(n, 0);
  state.pending_dcm.assign(n, 0);
  state.rng = Rng(seed);
  return state;
}

void arrival_step(EnvState& state) {
  const SimConfig& cfg = state.config;
  for (int u = 0; u < cfg.n_ue; ++u) {
    auto& generated = state.generated_count[static_cast<std::size_t>(u)];
    if (generated >= cfg.total_sdus) continue;
    if (!state.rng.bernoulli(cfg.p_arrival)) continue;

    auto& buffer = state.buffers[static_cast<std::size_t>(u)];
    Sdu sdu;
    sdu.id = state.ledger.size();
    sdu.owner = u;
    sdu.generated_at = state.t;
    if (static_cast<int>(buffer.size()) < cfg.buffer_capacity) {
      sdu.in_buffer = true;
      buffer.push_back(sdu.id);
    } else {
      sdu.dropped = true;
      ++state.stats.dropped;
    }
    state.ledger.push_back(sdu);
    ++generated;
    ++state.stats.n_generated;
  }
}

ChannelOutcome resolve_channel(std::span<const int> transmitters, double tbler, Rng& rng) {
  if (transmitters.empty()) return ChannelOutcome::idle();
  if (transmitters.size() > 1) return ChannelOutcome::non_decodable();
  if (rng.bernoulli(tbler)) return ChannelOutcome::non_decodable();
  return ChannelOutcome::decoded(transmitters.front());
}

int bs_observation(const ChannelOutcome& outcome, int n_ue) {
  switch (outcome.kind) {
    case ChannelOutcome::Kind::Idle:
      return 0;
    case ChannelOutcome::Kind::Decoded:
      return outcome.ue + 1;
    case ChannelOutcome::Kind::NonDecodable:
      break;
  }
  return n_ue + 1;
}

int ue_observation(const EnvState& state, int u) {
  if (u < 0 || u >= state.config.n_ue) {
    throw std::out_of_range("ue index " + std::to_string(u) + " out of range");
  }
  return static_cast<int>(state.buffers[static_cast<std::size_t>(u)].size());
}

int compute_reward(const StepEvents& events, int reward_param) {
  const int received = events.new_sdu_received ? 1 : 0;
  if (received == 0 && events.wrongful_deletions == 0) return -1;
  return reward_param * received - reward_param * events.wrongful_deletions;
}

bool episode_done(const EnvState& state) {
  if (state.t >= state.config.max_steps) return true;
  for (int generated : state.generated_count) {
    if (generated < state.config.total_sdus) return false;
  }
  for (const auto& buffer : state.buffers) {
    if (!buffer.empty()) return false;
  }
  return std::all_of(state.ledger.begin(), state.ledger.end(),
                     [](const Sdu& s) { return s.dropped || s.received_by_bs; });
}

StepResult step(EnvState& state, std::span<const UeAction> ue_actions,
                const BsActionProvider& bs_action_provider) {
  const SimConfig& cfg = state.config;
  if (episode_done(state)) throw UsageError("step called on a finished episode");
  if (static_cast<int>(ue_actions.size()) != cfg.n_ue) {
    throw UsageError("expected one UeAction per UE");
  }
  for (const UeAction& a : ue_actions) {
    const int env_action = static_cast<int>(a.env_action);
    if (env_action < 0 || env_action >= kEnvActionCount) throw UsageError("invalid env_action");
    if (a.ucm < 0 || a.ucm >= cfg.ul_vocab) throw UsageError("ucm outside the uplink vocabulary");
  }

  arrival_step(state);

  StepResult result;
  StepEvents& events = result.info.events;
  std::vector<std::size_t> pdu(static_cast<std::size_t>(cfg.n_ue), 0);
  for (int u = 0; u < cfg.n_ue; ++u) {
    auto& buffer = state.buffers[static_cast<std::size_t>(u)];
    if (buffer.empty()) continue;  // Transmit/Delete on an empty buffer are no-ops
    switch (ue_actions[static_cast<std::size_t>(u)].env_action) {
      case EnvAction::Nothing:
        break;
      case EnvAction::Transmit:
        pdu[static_cast<std::size_t>(u)] = buffer.front();
        result.info.transmitters.push_back(u);
        break;
      case EnvAction::Delete: {
        Sdu& sdu = state.ledger[buffer.front()];
        buffer.pop_front();
        sdu.in_buffer = false;
        ++state.stats.deletions;
        if (!sdu.received_by_bs) {
          ++events.wrongful_deletions;
          ++state.stats.wrongful_deletions;
        }
        break;
      }
    }
  }

  const ChannelOutcome outcome = resolve_channel(result.info.transmitters, cfg.tbler, state.rng);
  if (result.info.transmitters.size() > 1) {
    ++state.stats.collisions;
  } else if (result.info.transmitters.size() == 1 &&
             outcome.kind == ChannelOutcome::Kind::NonDecodable) {
    ++state.stats.erasures;
  }
  if (outcome.kind == ChannelOutcome::Kind::Decoded) {
    Sdu& sdu = state.ledger[pdu[static_cast<std::size_t>(outcome.ue)]];
    if (!sdu.received_by_bs) {
      sdu.received_by_bs = true;
      events.new_sdu_received = true;
      ++state.stats.n_rx;
    }
  }
  state.last_outcome = outcome;
  result.info.outcome = outcome;

  std::vector<int> ucms(static_cast<std::size_t>(cfg.n_ue));
  for (std::size_t u = 0; u < ucms.size(); ++u) ucms[u] = ue_actions[u].ucm;
  result.bs_observation = bs_observation(outcome, cfg.n_ue);
  BsAction bs_action = bs_action_provider(BsView{result.bs_observation, ucms});
  if (static_cast<int>(bs_action.dcm.size()) != cfg.n_ue) {
    throw UsageError("BsAction must carry one DCM per UE");
  }
  for (int d : bs_action.dcm) {
    if (d < 0 || d >= cfg.dl_vocab) throw UsageError("dcm outside the downlink vocabulary");
  }
  state.pending_dcm = bs_action.dcm;
  result.info.dcm = std::move(bs_action.dcm);

  result.reward = compute_reward(events, cfg.reward_param);
  ++state.t;
  state.stats.n_ttis = state.t;
  result.done = episode_done(state);

  result.ue_observations.resize(static_cast<std::size_t>(cfg.n_ue));
  for (int u = 0; u < cfg.n_ue; ++u) {
    result.ue_observations[static_cast<std::size_t>(u)] = ue_observation(state, u);
  }
  return result;
}

double goodput(const EpisodeStats& stats) {
  if (stats.n_ttis <= 0) throw MetricError("goodput undefined for an episode of zero TTIs");
  return static_cast<double>(stats.n_rx) / static_cast<double>(stats.n_ttis);
}

double delivery_rate(const EpisodeStats& stats, const SimConfig& config) {
  return static_cast<double>(stats.n_rx) /
         (static_cast<double>(config.total_sdus) * static_cast<double>(config.n_ue));
}

}  // namespace emac::env
