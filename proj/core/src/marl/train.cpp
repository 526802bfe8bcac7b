#include "emac/marl/train.hpp"

#include <optional>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "emac/env/environment.hpp"
#include "emac/marl/policy.hpp"

namespace emac::marl {
namespace {

// Update rounds allocate and free megabyte-sized Eigen temporaries. With
// glibc defaults each of those is an mmap/munmap pair and the page faults
// dominate the run time, so keep them on the heap instead.
void keep_large_blocks_on_heap() {
#if defined(__GLIBC__)
  static const bool once = [] {
    mallopt(M_MMAP_THRESHOLD, 64 << 20);
    mallopt(M_TRIM_THRESHOLD, 256 << 20);
    return true;
  }();
  (void)once;
#endif
}

}  // namespace

std::vector<std::uint64_t> episode_seeds(std::uint64_t seed, std::uint64_t stream,
                                         std::size_t count) {
  Rng rng(seed, stream);
  std::vector<std::uint64_t> seeds(count);
  for (auto& s : seeds) s = rng.next_u64();
  return seeds;
}

TrainResult train_run(const env::SimConfig& sim, const TrainConfig& train, std::uint64_t seed,
                      const EvalObserver& observer) {
  keep_large_blocks_on_heap();
  const AgentLayout layout = make_layout(sim, train);
  TrainResult result;
  Rng init_rng(seed, kInitStream);
  result.nets = make_actor_critic(layout, train.hidden_units, init_rng);
  result.eval_seeds = episode_seeds(seed, kEvalStream, static_cast<std::size_t>(train.episodes_eval));

  Rng episode_rng(seed, kTrainEpisodeStream);
  Rng update_rng(seed, kUpdateStream);
  ReplayBuffer replay(static_cast<std::size_t>(train.replay_capacity), layout.joint_state(),
                      layout.joint_action());
  ActorPolicy behaviour(result.nets, ActionMode::Explore, train.gumbel_temperature,
                        Rng(seed, kExploreStream).next_u64());

  auto run_eval = [&](int episode) {
    const EvalSummary summary = evaluate(result.nets, sim, result.eval_seeds);
    EvalPoint point{episode, summary.mean_goodput, summary.mean_delivery_rate,
                    summary.mean_duration};
    result.eval_trace.push_back(point);
    if (observer) observer(point);
  };

  run_eval(0);
  const env::BsActionProvider provider = [&behaviour](const env::BsView& view) {
    return behaviour.act_bs(view);
  };
  for (int episode = 0; episode < train.episodes_train; ++episode) {
    const std::uint64_t episode_seed = episode_rng.next_u64();
    env::EnvState state = env::new_episode(sim, episode_seed);
    behaviour.begin_episode(sim, episode_seed);

    // A transition's next joint state is only known once the following TTI's
    // BS decision has been made, so each transition waits one step.
    std::optional<Transition> pending;
    bool done = false;
    while (!done) {
      const auto actions = behaviour.act_ues(env::observe_ues(state));
      const env::StepResult step = env::step(state, actions, provider);
      done = step.done;

      if (pending) {
        pending->next_state = behaviour.joint_state();
        replay.push(*pending);
        pending.reset();
      }
      Transition tr{behaviour.joint_state(), behaviour.joint_action(),
                    static_cast<double>(step.reward), {}, done};
      if (done) {
        tr.next_state = tr.state;  // masked by done in the TD target
        replay.push(tr);
      } else {
        pending = std::move(tr);
      }

      ++result.env_steps;
      if (result.env_steps % train.update_interval == 0) {
        if (maybe_update(replay, result.nets, train, update_rng)) ++result.updates;
      }
    }

    const int completed = episode + 1;
    if (completed % train.eval_interval == 0 || completed == train.episodes_train) {
      run_eval(completed);
    }
  }
  return result;
}

}  // namespace emac::marl
