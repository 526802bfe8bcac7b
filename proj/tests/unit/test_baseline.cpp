#include <gtest/gtest.h>

#include <sstream>

#include "emac/baseline/baseline.hpp"
#include "emac/env/environment.hpp"
#include "emac/env/trace.hpp"
#include "emac/errors.hpp"

namespace emac::baseline {
namespace {

using env::EnvAction;

TEST(BaselineUe, Rules) {
  EXPECT_EQ(baseline_ue_policy(0, 0), (env::UeAction{EnvAction::Nothing, 0}));
  EXPECT_EQ(baseline_ue_policy(1, 0), (env::UeAction{EnvAction::Nothing, 1}));
  EXPECT_EQ(baseline_ue_policy(2, 1), (env::UeAction{EnvAction::Transmit, 1}));
  EXPECT_EQ(baseline_ue_policy(1, 2), (env::UeAction{EnvAction::Delete, 1}));
  // A grant or ACK reaching an empty buffer is ignored.
  EXPECT_EQ(baseline_ue_policy(0, 1), (env::UeAction{EnvAction::Nothing, 0}));
  EXPECT_EQ(baseline_ue_policy(0, 2), (env::UeAction{EnvAction::Nothing, 0}));
}

TEST(BaselineBs, AckAndGrant) {
  Rng rng(1);
  const std::vector<int> both_sr{1, 1};
  // UE 0 decoded: it gets ACK, its SR is ignored, UE 1 is the only requester.
  EXPECT_EQ(baseline_bs_policy(1, both_sr, rng).dcm, (std::vector<int>{2, 1}));
  const std::vector<int> none{0, 0};
  EXPECT_EQ(baseline_bs_policy(0, none, rng).dcm, (std::vector<int>{0, 0}));
  // Collision: nobody acknowledged.
  const std::vector<int> one{0, 1};
  EXPECT_EQ(baseline_bs_policy(3, one, rng).dcm, (std::vector<int>{0, 1}));
}

TEST(BaselineBs, SingleGrantUniformAmongRequesters) {
  Rng rng(2);
  const std::vector<int> all_sr{1, 1, 1};
  std::vector<int> grants(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const auto dcm = baseline_bs_policy(0, all_sr, rng).dcm;
    int sg = 0;
    for (int u = 0; u < 3; ++u) {
      if (dcm[u] == 1) {
        ++sg;
        ++grants[u];
      }
    }
    ASSERT_EQ(sg, 1);
  }
  for (int g : grants) EXPECT_NEAR(g / double(n), 1.0 / 3.0, 0.015);
}

TEST(BaselineBs, NoDrawForSingleRequester) {
  Rng a(5), b(5);
  const std::vector<int> one{1, 0};
  baseline_bs_policy(0, one, a);
  EXPECT_EQ(a, b);
}

TEST(Baseline, VocabularyTooSmall) {
  env::SimConfig c = env::reference_config();
  c.dl_vocab = 2;
  EXPECT_THROW(run_baseline_episode(c, 1), ConfigError);
}

// P=1, TBLER=0, p=1: both SDUs arrive at t=0, but UEs decide on the
// pre-arrival buffer, so requests start at t=1. Five TTIs in total.
TEST(Baseline, HandTracedPipeline) {
  env::SimConfig c = env::reference_config();
  c.total_sdus = 1;
  c.tbler = 0.0;
  c.p_arrival = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<env::TraceRow> rows;
    const env::EpisodeStats st = run_baseline_episode(c, seed, &rows);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(st.n_ttis, 5);
    EXPECT_EQ(st.n_rx, 2);
    EXPECT_DOUBLE_EQ(env::goodput(st), 0.4);
    EXPECT_DOUBLE_EQ(env::delivery_rate(st, c), 1.0);

    // t=0: empty buffers at decision time, nothing requested or granted.
    EXPECT_EQ(rows[0].ucm, (std::vector<int>{0, 0}));
    EXPECT_EQ(rows[0].dcm, (std::vector<int>{0, 0}));
    EXPECT_EQ(rows[0].reward, -1);
    // t=1: both request, one grant.
    const int first = rows[1].dcm[0] == 1 ? 0 : 1;
    const int second = 1 - first;
    EXPECT_EQ(rows[1].ucm, (std::vector<int>{1, 1}));
    EXPECT_EQ(rows[1].dcm[first], 1);
    EXPECT_EQ(rows[1].dcm[second], 0);
    EXPECT_EQ(rows[1].reward, -1);
    // t=2: granted UE transmits and is acknowledged; the other gets the grant.
    EXPECT_EQ(rows[2].action[first], 1);
    EXPECT_EQ(rows[2].action[second], 0);
    EXPECT_EQ(rows[2].channel, first + 1);
    EXPECT_EQ(rows[2].dcm[first], 2);
    EXPECT_EQ(rows[2].dcm[second], 1);
    EXPECT_EQ(rows[2].reward, 3);
    // t=3: first deletes (still requesting: its buffer was non-empty at
    // decision time), second transmits.
    EXPECT_EQ(rows[3].action[first], 2);
    EXPECT_EQ(rows[3].ucm[first], 1);
    EXPECT_EQ(rows[3].action[second], 1);
    EXPECT_EQ(rows[3].channel, second + 1);
    EXPECT_EQ(rows[3].dcm[second], 2);
    EXPECT_EQ(rows[3].reward, 3);
    // t=4: the stale grant to the empty UE is ignored, second deletes; done.
    EXPECT_EQ(rows[4].action[first], 0);
    EXPECT_EQ(rows[4].action[second], 2);
    EXPECT_EQ(rows[4].reward, -1);
  }
}

TEST(Baseline, NoCollisionsNoWrongfulDeletions) {
  for (double tbler : {0.0, 0.1, 0.5, 1.0}) {
    env::SimConfig c = env::reference_config();
    c.tbler = tbler;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      const env::EpisodeStats st = run_baseline_episode(c, seed);
      ASSERT_EQ(st.collisions, 0);
      ASSERT_EQ(st.wrongful_deletions, 0);
    }
  }
}

TEST(Baseline, LosslessChannelDeliversEverything) {
  env::SimConfig c = env::reference_config();
  c.tbler = 0.0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const env::EpisodeStats st = run_baseline_episode(c, seed);
    ASSERT_DOUBLE_EQ(env::delivery_rate(st, c), 1.0) << seed;
  }
}

TEST(Baseline, Deterministic) {
  std::vector<env::TraceRow> a, b;
  run_baseline_episode(env::reference_config(), 77, &a);
  run_baseline_episode(env::reference_config(), 77, &b);
  EXPECT_EQ(a, b);
}

TEST(Trace, RoundTripAndRecount) {
  const env::SimConfig c = env::reference_config();
  std::stringstream ss;
  env::write_trace_header(ss, c.n_ue);
  std::vector<env::EpisodeStats> stats;
  std::vector<std::vector<env::TraceRow>> all;
  for (std::uint64_t e = 0; e < 50; ++e) {
    std::vector<env::TraceRow> rows;
    stats.push_back(run_baseline_episode(c, e, &rows));
    env::write_trace_rows(ss, e, rows);
    all.push_back(rows);
  }
  const auto traces = env::read_trace_csv(ss);
  ASSERT_EQ(traces.size(), 50u);
  for (std::size_t e = 0; e < traces.size(); ++e) {
    EXPECT_EQ(traces[e].rows, all[e]);
    const auto counts = env::recount(traces[e].rows);
    EXPECT_EQ(counts.n_rx, stats[e].n_rx);
    EXPECT_EQ(counts.n_ttis, stats[e].n_ttis);
  }
}

}  // namespace
}  // namespace emac::baseline
