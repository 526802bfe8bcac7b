#include "emac/marl/policy.hpp"

#include <algorithm>

#include "emac/errors.hpp"
#include "emac/nn/gumbel.hpp"

namespace emac::marl {

std::vector<int> select_actions(const nn::Mlp& actor, std::span<const double> state,
                                std::span<const int> heads, ActionMode mode, double temperature,
                                Rng* rng) {
  const Eigen::VectorXd logits = nn::predict(actor, state);
  std::vector<int> choice;
  choice.reserve(heads.size());
  Eigen::Index at = 0;
  for (int width : heads) {
    std::span<const double> head(logits.data() + at, static_cast<std::size_t>(width));
    if (mode == ActionMode::Greedy) {
      choice.push_back(static_cast<int>(nn::argmax(head)));
    } else {
      if (!rng) throw UsageError("exploration requires a random generator");
      const auto sample = nn::gumbel_softmax_sample(head, temperature, *rng);
      choice.push_back(static_cast<int>(nn::argmax(sample)));
    }
    at += width;
  }
  return choice;
}

void write_one_hot(std::span<const int> heads, std::span<const int> choice, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::size_t at = 0;
  for (std::size_t h = 0; h < heads.size(); ++h) {
    out[at + static_cast<std::size_t>(choice[h])] = 1.0;
    at += static_cast<std::size_t>(heads[h]);
  }
}

ActorPolicy::ActorPolicy(const ActorCritic& nets, ActionMode mode, double temperature,
                         std::uint64_t exploration_seed)
    : nets_(&nets),
      history_(nets.layout),
      mode_(mode),
      temperature_(temperature),
      rng_(exploration_seed),
      joint_state_(static_cast<std::size_t>(nets.layout.joint_state()), 0.0),
      joint_action_(static_cast<std::size_t>(nets.layout.joint_action()), 0.0) {}

void ActorPolicy::begin_episode(const env::SimConfig& config, std::uint64_t /*seed*/) {
  const AgentLayout& L = nets_->layout;
  if (config.n_ue != L.n_ue || config.buffer_capacity != L.buffer_capacity ||
      config.ul_vocab != L.ul_vocab || config.dl_vocab != L.dl_vocab) {
    throw ConfigError("simulation config does not match the trained agent layout");
  }
  history_.reset();
}

std::vector<env::UeAction> ActorPolicy::act_ues(std::span<const env::UeObservation> observations) {
  const AgentLayout& L = nets_->layout;
  std::vector<env::UeAction> actions(observations.size());
  for (int u = 0; u < L.n_ue; ++u) {
    const auto& obs = observations[static_cast<std::size_t>(u)];
    history_.observe_ue(u, obs.buffer_len, obs.dcm);
    std::span<double> state(joint_state_.data() + L.ue_state_offset(u),
                            static_cast<std::size_t>(L.ue_state));
    history_.encode_ue(u, state);
    const auto choice =
        select_actions(nets_->ue.actor, state, L.ue_heads, mode_, temperature_, &rng_);
    write_one_hot(L.ue_heads, choice,
                  {joint_action_.data() + L.ue_action_offset(u), static_cast<std::size_t>(L.ue_action)});
    auto& action = actions[static_cast<std::size_t>(u)];
    action.env_action = static_cast<env::EnvAction>(choice[0]);
    action.ucm = L.comm ? choice[1] : 0;
    history_.record_ue_action(u, choice[0], action.ucm);
  }
  return actions;
}

env::BsAction ActorPolicy::act_bs(const env::BsView& view) {
  const AgentLayout& L = nets_->layout;
  history_.observe_bs(view.observation, view.ucms);
  std::span<double> state(joint_state_.data() + L.bs_state_offset(),
                          static_cast<std::size_t>(L.bs_state));
  history_.encode_bs(state);
  env::BsAction action;
  action.dcm.assign(static_cast<std::size_t>(L.n_ue), 0);
  if (nets_->bs) {
    action.dcm = select_actions(nets_->bs->actor, state, L.bs_heads, mode_, temperature_, &rng_);
    write_one_hot(L.bs_heads, action.dcm,
                  {joint_action_.data() + L.bs_action_offset(), static_cast<std::size_t>(L.bs_action)});
  }
  history_.record_bs_action(action.dcm);
  return action;
}

EvalSummary evaluate(env::Policy& policy, const env::SimConfig& sim,
                     std::span<const std::uint64_t> seeds) {
  EvalSummary summary;
  summary.episodes.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    const env::EpisodeStats stats = env::run_episode(policy, sim, seed);
    summary.mean_goodput += env::goodput(stats);
    summary.mean_delivery_rate += env::delivery_rate(stats, sim);
    summary.mean_duration += stats.n_ttis;
    summary.episodes.push_back(stats);
  }
  if (!seeds.empty()) {
    const auto n = static_cast<double>(seeds.size());
    summary.mean_goodput /= n;
    summary.mean_delivery_rate /= n;
    summary.mean_duration /= n;
  }
  return summary;
}

EvalSummary evaluate(const ActorCritic& nets, const env::SimConfig& sim,
                     std::span<const std::uint64_t> seeds) {
  ActorPolicy policy(nets, ActionMode::Greedy);
  return evaluate(policy, sim, seeds);
}

}  // namespace emac::marl
