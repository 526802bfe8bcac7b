#include <benchmark/benchmark.h>

#include <vector>

#include "emac/baseline/baseline.hpp"
#include "emac/env/environment.hpp"
#include "emac/marl/layout.hpp"
#include "emac/marl/learner.hpp"
#include "emac/marl/replay.hpp"
#include "emac/nn/mlp.hpp"
#include "emac/rng.hpp"

namespace {

using namespace emac;

void BM_EnvStep(benchmark::State& st) {
  const env::SimConfig sim = env::reference_config();
  Rng rng(1);
  env::EnvState state = env::new_episode(sim, 1);
  std::vector<env::UeAction> actions(static_cast<std::size_t>(sim.n_ue));
  const env::BsActionProvider bs = [&](const env::BsView&) {
    env::BsAction a;
    a.dcm.assign(static_cast<std::size_t>(sim.n_ue), 0);
    return a;
  };
  std::uint64_t seed = 1;
  for (auto _ : st) {
    if (env::episode_done(state)) state = env::new_episode(sim, ++seed);
    for (auto& a : actions) a.env_action = static_cast<env::EnvAction>(rng.uniform_index(3));
    benchmark::DoNotOptimize(env::step(state, actions, bs));
  }
}
BENCHMARK(BM_EnvStep);

void BM_BaselineEpisode(benchmark::State& st) {
  const env::SimConfig sim = env::reference_config();
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(baseline::run_baseline_episode(sim, ++seed));
}
BENCHMARK(BM_BaselineEpisode);

void BM_MlpForwardBackward(benchmark::State& st) {
  Rng rng(2);
  const int batch = static_cast<int>(st.range(0));
  const std::vector<int> dims{48, 64, 64, 1};
  const nn::Mlp mlp = nn::init_mlp(dims, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(48, batch);
  const Eigen::MatrixXd g = Eigen::MatrixXd::Ones(1, batch);
  for (auto _ : st) {
    const nn::ForwardResult fr = nn::forward(mlp, x);
    benchmark::DoNotOptimize(nn::backward(mlp, fr.cache, g));
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(1)->Arg(1024);

void BM_UpdateRound(benchmark::State& st) {
  const env::SimConfig sim = env::reference_config();
  marl::TrainConfig train;
  const marl::AgentLayout layout = marl::make_layout(sim, train);
  Rng rng(3);
  marl::ActorCritic nets = marl::make_actor_critic(layout, train.hidden_units, rng);
  marl::ReplayBuffer replay(4096, layout.joint_state(), layout.joint_action());
  for (int i = 0; i < 4096; ++i) {
    marl::Transition tr;
    tr.state.resize(static_cast<std::size_t>(layout.joint_state()));
    tr.next_state.resize(tr.state.size());
    tr.action.resize(static_cast<std::size_t>(layout.joint_action()));
    for (auto* v : {&tr.state, &tr.next_state, &tr.action}) {
      for (double& x : *v) x = rng.bernoulli(0.2) ? 1.0 : 0.0;
    }
    tr.reward = rng.bernoulli(0.1) ? 3.0 : -1.0;
    tr.done = rng.bernoulli(0.05);
    replay.push(tr);
  }
  for (auto _ : st) benchmark::DoNotOptimize(marl::maybe_update(replay, nets, train, rng));
}
BENCHMARK(BM_UpdateRound)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
