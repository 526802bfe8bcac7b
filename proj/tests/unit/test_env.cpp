#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "emac/env/environment.hpp"
#include "emac/errors.hpp"

namespace emac::env {
namespace {

BsActionProvider null_bs(int n_ue) {
  return [n_ue](const BsView&) { return BsAction{std::vector<int>(n_ue, 0)}; };
}

std::vector<UeAction> all(int n, EnvAction a) { return std::vector<UeAction>(n, UeAction{a, 0}); }

TEST(SimConfig, ReferenceValues) {
  const SimConfig c = reference_config();
  EXPECT_EQ(c.n_ue, 2);
  EXPECT_EQ(c.buffer_capacity, 5);
  EXPECT_EQ(c.total_sdus, 2);
  EXPECT_DOUBLE_EQ(c.p_arrival, 0.5);
  EXPECT_DOUBLE_EQ(c.tbler, 0.1);
  EXPECT_EQ(c.dl_vocab, 3);
  EXPECT_EQ(c.ul_vocab, 2);
  EXPECT_EQ(c.max_steps, 24);
  EXPECT_EQ(c.reward_param, 3);
}

TEST(SimConfig, InvalidConfigsRejected) {
  auto bad = [](auto mutate) {
    SimConfig c = reference_config();
    mutate(c);
    return c;
  };
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.n_ue = 0; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.buffer_capacity = 0; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.total_sdus = 0; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.p_arrival = 1.5; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.tbler = -0.1; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.dl_vocab = 0; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.ul_vocab = 0; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.max_steps = 0; }), 1), ConfigError);
  EXPECT_THROW(new_episode(bad([](SimConfig& c) { c.reward_param = 0; }), 1), ConfigError);
}

TEST(NewEpisode, FreshState) {
  const EnvState s = new_episode(reference_config(), 7);
  EXPECT_EQ(s.t, 0);
  ASSERT_EQ(s.buffers.size(), 2u);
  EXPECT_TRUE(s.buffers[0].empty());
  EXPECT_TRUE(s.buffers[1].empty());
  EXPECT_TRUE(s.ledger.empty());
  EXPECT_EQ(s.pending_dcm, (std::vector<int>{0, 0}));
  EXPECT_EQ(s.stats, EpisodeStats{});
  EXPECT_FALSE(episode_done(s));
}

TEST(NewEpisode, SameSeedIdenticalState) {
  EXPECT_EQ(new_episode(reference_config(), 7), new_episode(reference_config(), 7));
  EXPECT_FALSE(new_episode(reference_config(), 7) == new_episode(reference_config(), 8));
}

TEST(Arrivals, CertainArrival) {
  SimConfig c = reference_config();
  c.p_arrival = 1.0;
  EnvState s = new_episode(c, 1);
  arrival_step(s);
  EXPECT_EQ(s.buffers[0].size(), 1u);
  EXPECT_EQ(s.buffers[1].size(), 1u);
  EXPECT_EQ(s.generated_count, (std::vector<int>{1, 1}));
}

TEST(Arrivals, ImpossibleArrival) {
  SimConfig c = reference_config();
  c.p_arrival = 0.0;
  EnvState s = new_episode(c, 1);
  const EnvState before = s;
  arrival_step(s);
  EXPECT_EQ(s.buffers, before.buffers);
  EXPECT_EQ(s.generated_count, before.generated_count);
}

TEST(Arrivals, NoDrawOnceAllGenerated) {
  SimConfig c = reference_config();
  c.p_arrival = 1.0;
  c.total_sdus = 1;
  EnvState s = new_episode(c, 1);
  arrival_step(s);
  const EnvState after_first = s;
  arrival_step(s);
  EXPECT_EQ(s, after_first);  // includes RNG state: nothing was drawn
}

TEST(Arrivals, FullBufferDropsButCounts) {
  SimConfig c = reference_config();
  c.n_ue = 1;
  c.p_arrival = 1.0;
  c.buffer_capacity = 1;
  c.total_sdus = 3;
  EnvState s = new_episode(c, 1);
  arrival_step(s);
  arrival_step(s);
  EXPECT_EQ(s.buffers[0].size(), 1u);
  EXPECT_EQ(s.generated_count[0], 2);
  EXPECT_EQ(s.stats.dropped, 1);
  EXPECT_TRUE(s.ledger[1].dropped);
  EXPECT_FALSE(s.ledger[1].in_buffer);
}

TEST(Channel, Cases) {
  Rng rng(3);
  const std::vector<int> none, one{0}, two{0, 1};
  EXPECT_EQ(resolve_channel(none, 0.1, rng), ChannelOutcome::idle());
  EXPECT_EQ(resolve_channel(two, 0.0, rng), ChannelOutcome::non_decodable());
  EXPECT_EQ(resolve_channel(one, 0.0, rng), ChannelOutcome::decoded(0));
  EXPECT_EQ(resolve_channel(one, 1.0, rng), ChannelOutcome::non_decodable());
}

TEST(Channel, OnlySingleTransmitterConsumesVariate) {
  Rng a(5), b(5);
  const std::vector<int> none, two{0, 1}, one{1};
  resolve_channel(none, 0.5, a);
  resolve_channel(two, 0.5, a);
  EXPECT_EQ(a, b);
  resolve_channel(one, 0.5, a);
  b.next_u64();
  EXPECT_EQ(a, b);
}

TEST(Observation, BsEncoding) {
  EXPECT_EQ(bs_observation(ChannelOutcome::idle(), 2), 0);
  EXPECT_EQ(bs_observation(ChannelOutcome::decoded(1), 2), 2);  // second UE
  EXPECT_EQ(bs_observation(ChannelOutcome::decoded(0), 2), 1);
  EXPECT_EQ(bs_observation(ChannelOutcome::non_decodable(), 2), 3);
}

TEST(Observation, UeBufferLength) {
  SimConfig c = reference_config();
  c.p_arrival = 1.0;
  c.total_sdus = 5;
  EnvState s = new_episode(c, 1);
  EXPECT_EQ(ue_observation(s, 0), 0);
  for (int i = 0; i < 3; ++i) arrival_step(s);
  EXPECT_EQ(ue_observation(s, 0), 3);
  for (int i = 0; i < 2; ++i) arrival_step(s);
  EXPECT_EQ(ue_observation(s, 1), 5);
  EXPECT_THROW(ue_observation(s, 2), std::out_of_range);
  EXPECT_THROW(ue_observation(s, -1), std::out_of_range);
}

TEST(Reward, Cases) {
  EXPECT_EQ(compute_reward({true, 0}, 3), 3);
  EXPECT_EQ(compute_reward({false, 1}, 3), -3);
  EXPECT_EQ(compute_reward({false, 0}, 3), -1);
  EXPECT_EQ(compute_reward({false, 2}, 3), -6);
  EXPECT_EQ(compute_reward({true, 1}, 3), 0);
}

TEST(Step, CollisionGivesMinusOne) {
  SimConfig c = reference_config();
  c.p_arrival = 1.0;
  EnvState s = new_episode(c, 1);
  const StepResult r = step(s, all(2, EnvAction::Transmit), null_bs(2));
  EXPECT_EQ(r.info.outcome, ChannelOutcome::non_decodable());
  EXPECT_EQ(r.bs_observation, 3);
  EXPECT_EQ(r.reward, -1);
  EXPECT_EQ(s.stats.collisions, 1);
  EXPECT_EQ(s.t, 1);
}

TEST(Step, SingleFreshTransmissionWithoutErasure) {
  SimConfig c = reference_config();
  c.p_arrival = 1.0;
  c.tbler = 0.0;
  EnvState s = new_episode(c, 1);
  std::vector<UeAction> a{{EnvAction::Transmit, 0}, {EnvAction::Nothing, 0}};
  const StepResult r = step(s, a, null_bs(2));
  EXPECT_EQ(r.info.outcome, ChannelOutcome::decoded(0));
  EXPECT_EQ(r.reward, 3);
  EXPECT_EQ(s.stats.n_rx, 1);
  // Still buffered until deleted.
  EXPECT_EQ(r.ue_observations, (std::vector<int>{1, 1}));
}

TEST(Step, AdditiveRewardOracle) {
  // UE 0 deletes its unreceived SDU while UE 1's fresh SDU is decoded.
  SimConfig c = reference_config();
  c.p_arrival = 1.0;
  c.tbler = 0.0;
  EnvState s = new_episode(c, 1);
  std::vector<UeAction> a{{EnvAction::Delete, 0}, {EnvAction::Transmit, 0}};
  const StepResult r = step(s, a, null_bs(2));
  const int expected = c.reward_param * 1 - c.reward_param * 1;
  EXPECT_EQ(r.reward, expected);
  EXPECT_EQ(r.reward, 0);
  EXPECT_TRUE(r.info.events.new_sdu_received);
  EXPECT_EQ(r.info.events.wrongful_deletions, 1);
}

TEST(Step, RetransmissionDoesNotCountTwice) {
  SimConfig c = reference_config();
  c.n_ue = 1;
  c.p_arrival = 1.0;
  c.tbler = 0.0;
  c.total_sdus = 1;
  EnvState s = new_episode(c, 1);
  std::vector<UeAction> tx{{EnvAction::Transmit, 0}};
  EXPECT_EQ(step(s, tx, null_bs(1)).reward, 3);
  EXPECT_EQ(step(s, tx, null_bs(1)).reward, -1);
  EXPECT_EQ(s.stats.n_rx, 1);
  std::vector<UeAction> del{{EnvAction::Delete, 0}};
  const StepResult r = step(s, del, null_bs(1));
  EXPECT_EQ(r.reward, -1);  // correct deletion is not rewarded
  EXPECT_TRUE(r.done);
  EXPECT_EQ(s.stats.wrongful_deletions, 0);
}

TEST(Step, EmptyBufferActionsAreNoOps) {
  SimConfig c = reference_config();
  c.p_arrival = 0.0;
  EnvState s = new_episode(c, 1);
  std::vector<UeAction> a{{EnvAction::Delete, 0}, {EnvAction::Transmit, 0}};
  const StepResult r = step(s, a, null_bs(2));
  EXPECT_EQ(r.reward, -1);
  EXPECT_TRUE(r.info.transmitters.empty());
  EXPECT_EQ(r.info.outcome, ChannelOutcome::idle());
  EXPECT_EQ(s.stats.deletions, 0);
}

TEST(Step, DcmDeliveredNextTti) {
  SimConfig c = reference_config();
  EnvState s = new_episode(c, 1);
  std::vector<int> seen_ucms;
  auto provider = [&seen_ucms](const BsView& v) {
    seen_ucms.assign(v.ucms.begin(), v.ucms.end());
    return BsAction{{2, 1}};
  };
  std::vector<UeAction> a{{EnvAction::Nothing, 1}, {EnvAction::Nothing, 0}};
  step(s, a, provider);
  EXPECT_EQ(seen_ucms, (std::vector<int>{1, 0}));
  EXPECT_EQ(s.pending_dcm, (std::vector<int>{2, 1}));
}

TEST(Step, MalformedActionsRejected) {
  EnvState s = new_episode(reference_config(), 1);
  EXPECT_THROW(step(s, all(1, EnvAction::Nothing), null_bs(2)), UsageError);
  std::vector<UeAction> bad_ucm{{EnvAction::Nothing, 2}, {EnvAction::Nothing, 0}};
  EXPECT_THROW(step(s, bad_ucm, null_bs(2)), UsageError);
  auto bad_dcm = [](const BsView&) { return BsAction{{3, 0}}; };
  EXPECT_THROW(step(s, all(2, EnvAction::Nothing), bad_dcm), UsageError);
  auto short_dcm = [](const BsView&) { return BsAction{{0}}; };
  EXPECT_THROW(step(s, all(2, EnvAction::Nothing), short_dcm), UsageError);
}

TEST(Step, StepAfterDoneRejected) {
  SimConfig c = reference_config();
  c.max_steps = 2;
  EnvState s = new_episode(c, 1);
  step(s, all(2, EnvAction::Nothing), null_bs(2));
  EXPECT_TRUE(step(s, all(2, EnvAction::Nothing), null_bs(2)).done);
  EXPECT_THROW(step(s, all(2, EnvAction::Nothing), null_bs(2)), UsageError);
}

TEST(Done, RequiresEmptyBuffers) {
  SimConfig c = reference_config();
  c.n_ue = 1;
  c.total_sdus = 1;
  c.p_arrival = 1.0;
  c.tbler = 0.0;
  EnvState s = new_episode(c, 1);
  std::vector<UeAction> tx{{EnvAction::Transmit, 0}};
  const StepResult r = step(s, tx, null_bs(1));
  EXPECT_EQ(s.stats.n_rx, 1);
  EXPECT_FALSE(r.done);  // received but still buffered
}

TEST(Done, TruncatesAtMaxSteps) {
  SimConfig c = reference_config();
  EnvState s = new_episode(c, 1);
  StepResult r;
  for (int t = 0; t < 24; ++t) {
    ASSERT_FALSE(episode_done(s));
    r = step(s, all(2, EnvAction::Nothing), null_bs(2));
  }
  EXPECT_TRUE(r.done);
  EXPECT_EQ(s.t, 24);
  EXPECT_EQ(s.stats.n_ttis, 24);
}

TEST(Metrics, Goodput) {
  EpisodeStats st;
  st.n_rx = 4;
  st.n_ttis = 10;
  EXPECT_DOUBLE_EQ(goodput(st), 0.4);
  st.n_ttis = 24;
  EXPECT_DOUBLE_EQ(goodput(st), 1.0 / 6.0);
  st.n_rx = 0;
  EXPECT_EQ(goodput(st), 0.0);
  st.n_ttis = 0;
  EXPECT_THROW(goodput(st), MetricError);
}

TEST(Metrics, DeliveryRate) {
  EpisodeStats st;
  st.n_rx = 4;
  EXPECT_DOUBLE_EQ(delivery_rate(st, reference_config()), 1.0);
  st.n_rx = 3;
  EXPECT_DOUBLE_EQ(delivery_rate(st, reference_config()), 0.75);
}

// Random policies exercise every invariant of the environment.
class RandomRollout : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomRollout, Invariants) {
  SimConfig c = reference_config();
  c.n_ue = 3;
  c.buffer_capacity = 2;
  c.total_sdus = 4;
  c.p_arrival = 0.7;
  c.tbler = 0.3;
  Rng policy(GetParam(), 99);
  for (int ep = 0; ep < 200; ++ep) {
    EnvState s = new_episode(c, GetParam() * 1000 + ep);
    int prev_rx = 0;
    bool done = false;
    while (!done) {
      std::vector<UeAction> a(3);
      for (auto& x : a) {
        x.env_action = static_cast<EnvAction>(policy.uniform_index(3));
        x.ucm = static_cast<int>(policy.uniform_index(2));
      }
      const auto bs = [&policy](const BsView&) {
        BsAction b;
        for (int u = 0; u < 3; ++u) b.dcm.push_back(static_cast<int>(policy.uniform_index(3)));
        return b;
      };
      std::vector<bool> was_received;
      for (const auto& sdu : s.ledger) was_received.push_back(sdu.received_by_bs);
      const StepResult r = step(s, a, bs);
      done = r.done;

      // Reward soundness.
      std::set<int> allowed{-1};
      for (int i = 0; i <= 1; ++i) {
        for (int j = 0; j <= 3; ++j) {
          if (i != 0 || j != 0) allowed.insert(3 * i - 3 * j);
        }
      }
      EXPECT_TRUE(allowed.count(r.reward)) << r.reward;
      // Monotonicity.
      EXPECT_GE(s.stats.n_rx, prev_rx);
      prev_rx = s.stats.n_rx;
      for (std::size_t i = 0; i < was_received.size(); ++i) {
        if (was_received[i]) {
          EXPECT_TRUE(s.ledger[i].received_by_bs);
        }
      }
      // Collision law.
      if (r.info.transmitters.size() >= 2) {
        EXPECT_EQ(r.info.outcome, ChannelOutcome::non_decodable());
      }
      // Buffer bound and conservation.
      for (int u = 0; u < 3; ++u) {
        EXPECT_LE(static_cast<int>(s.buffers[u].size()), c.buffer_capacity);
        EXPECT_LE(s.generated_count[u], c.total_sdus);
        int generated = 0, buffered = 0, deleted = 0, dropped = 0;
        for (const auto& sdu : s.ledger) {
          if (sdu.owner != u) continue;
          ++generated;
          if (sdu.in_buffer) ++buffered;
          else if (sdu.dropped) ++dropped;
          else ++deleted;
        }
        EXPECT_EQ(generated, s.generated_count[u]);
        EXPECT_EQ(static_cast<std::size_t>(buffered), s.buffers[u].size());
        EXPECT_EQ(generated, buffered + deleted + dropped);
      }
      int received = 0;
      for (const auto& sdu : s.ledger) received += sdu.received_by_bs ? 1 : 0;
      EXPECT_EQ(received, s.stats.n_rx);
      EXPECT_LE(s.stats.n_rx, s.stats.n_generated);
      EXPECT_LE(s.stats.n_generated, c.total_sdus * c.n_ue);
      EXPECT_LE(s.t, c.max_steps);
    }
    EXPECT_LE(s.stats.n_ttis, c.max_steps);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomRollout, ::testing::Values(1u, 2u, 3u));

TEST(Determinism, SameActionsSameTrajectory) {
  auto run = [](std::uint64_t seed) {
    EnvState s = new_episode(reference_config(), seed);
    Rng policy(11);
    std::vector<StepResult> out;
    bool done = false;
    while (!done) {
      std::vector<UeAction> a(2);
      for (auto& x : a) x.env_action = static_cast<EnvAction>(policy.uniform_index(3));
      StepResult r = step(s, a, null_bs(2));
      done = r.done;
      out.push_back(r);
    }
    return std::make_pair(s, out.size());
  };
  EXPECT_EQ(run(42), run(42));
}

}  // namespace
}  // namespace emac::env
