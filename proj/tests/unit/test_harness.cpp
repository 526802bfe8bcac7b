#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emac/csv.hpp"
#include "emac/env/environment.hpp"
#include "emac/errors.hpp"
#include "emac/harness/campaign.hpp"
#include "emac/harness/checkpoint.hpp"
#include "emac/harness/config_file.hpp"
#include "emac/harness/report.hpp"

namespace emac::harness {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("emac_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProtocolRecord record(int rep, double goodput) {
  ProtocolRecord r;
  r.solution = "maddpg";
  r.tbler = 0.1;
  r.sdus = 1;
  r.repetition = rep;
  r.final_goodput = goodput;
  return r;
}

RunConfig tiny() {
  RunConfig c;
  c.train.replay_capacity = 1000;
  c.train.batch_size = 32;
  c.train.update_interval = 16;
  c.train.hidden_units = 8;
  c.train.episodes_train = 30;
  c.train.episodes_eval = 10;
  c.train.episodes_test = 20;
  c.train.eval_interval = 10;
  return c;
}

TEST(SelectBest, Argmax) {
  const std::vector<ProtocolRecord> rs{record(0, 0.10), record(1, 0.14), record(2, 0.12)};
  EXPECT_EQ(select_best(rs).repetition, 1);
}

TEST(SelectBest, TieGoesToLowestRepetition) {
  const std::vector<ProtocolRecord> rs{record(3, 0.14), record(1, 0.14), record(2, 0.1)};
  EXPECT_EQ(select_best(rs).repetition, 1);
}

TEST(SelectBest, SingleAndEmpty) {
  const std::vector<ProtocolRecord> one{record(4, 0.2)};
  EXPECT_EQ(select_best(one).repetition, 4);
  EXPECT_THROW(select_best(std::vector<ProtocolRecord>{}), UsageError);
  std::vector<ProtocolRecord> failed{record(0, 0.5)};
  failed[0].error = "disk full";
  EXPECT_THROW(select_best(failed), UsageError);
}

TEST(SelectBest, PermutationInvariant) {
  std::vector<ProtocolRecord> rs{record(0, 0.3), record(1, 0.5), record(2, 0.5), record(3, 0.1)};
  std::sort(rs.begin(), rs.end(), [](auto& a, auto& b) { return a.repetition < b.repetition; });
  do {
    EXPECT_EQ(select_best(rs).repetition, 1);
  } while (std::next_permutation(rs.begin(), rs.end(),
                                 [](auto& a, auto& b) { return a.repetition < b.repetition; }));
}

TEST(MeanCi, NormalApproximation) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanCi ci = mean_ci(v);
  EXPECT_DOUBLE_EQ(ci.mean, 2.5);
  const double sd = std::sqrt((2.25 + 0.25 + 0.25 + 2.25) / 3.0);
  EXPECT_NEAR(ci.half_width, 1.96 * sd / 2.0, 1e-15);
  EXPECT_EQ(mean_ci(std::vector<double>{5.0}).half_width, 0.0);
}

TEST(MeanCi, ShrinksWithSqrtN) {
  std::vector<double> small, large;
  for (int i = 0; i < 10; ++i) small.push_back(i % 2);
  for (int r = 0; r < 4; ++r) large.insert(large.end(), small.begin(), small.end());
  const double ratio = mean_ci(small).half_width / mean_ci(large).half_width;
  // Same spread, four times the samples: about a factor 2 (exact up to the n-1 correction).
  EXPECT_NEAR(ratio, 2.0 * std::sqrt((10.0 / 9.0) / (40.0 / 39.0)), 1e-12);
}

TEST(Config, ParseAndRoundTrip) {
  std::stringstream in(
      "# comment\n"
      "n_ue = 3\n"
      "tbler=0.01   # inline\n"
      "\n"
      "ablation = ddpg\n"
      "memory_inclusive = true\n");
  const RunConfig c = parse_config(in);
  EXPECT_EQ(c.sim.n_ue, 3);
  EXPECT_EQ(c.sim.tbler, 0.01);
  EXPECT_EQ(c.train.ablation, marl::Ablation::Ddpg);
  EXPECT_TRUE(c.train.memory_inclusive);
  EXPECT_EQ(c.train.batch_size, 1024);
  std::stringstream out;
  write_config(out, c);
  EXPECT_EQ(parse_config(out), c);
}

TEST(Config, Rejections) {
  auto parse = [](const std::string& text) {
    std::stringstream in(text);
    return parse_config(in);
  };
  EXPECT_THROW(parse("bogus_key = 1\n"), ConfigError);
  EXPECT_THROW(parse("n_ue = 2\nn_ue = 3\n"), ConfigError);
  EXPECT_THROW(parse("n_ue = two\n"), ConfigError);
  EXPECT_THROW(parse("n_ue\n"), ConfigError);
  EXPECT_THROW(parse("n_ue = 0\n"), ConfigError);
  EXPECT_THROW(parse("ablation = everything\n"), ConfigError);
  EXPECT_THROW(parse("memory_inclusive = maybe\n"), ConfigError);
}

TEST(Config, DeskDefaults) {
  const RunConfig c = desk_config();
  EXPECT_EQ(c.train.episodes_train, 20000);
  EXPECT_EQ(c.train.eval_interval, 500);
  EXPECT_EQ(c.sim, env::reference_config());
}

TEST(Checkpoint, RoundTrip) {
  RunConfig c = tiny();
  const marl::AgentLayout L = marl::make_layout(c.sim, c.train);
  Rng rng(3);
  Checkpoint ck{c, 42, marl::make_actor_critic(L, c.train.hidden_units, rng)};
  std::stringstream ss;
  write_checkpoint(ss, ck);
  const Checkpoint back = read_checkpoint(ss);
  EXPECT_EQ(back.config, c);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_TRUE(back.nets.ue.actor.same_parameters(ck.nets.ue.actor));
  EXPECT_TRUE(back.nets.bs->target_critic.same_parameters(ck.nets.bs->target_critic));
}

TEST(Checkpoint, NoCommHasNoBsBlock) {
  RunConfig c = tiny();
  c.train.ablation = marl::Ablation::NoComm;
  Rng rng(3);
  Checkpoint ck{c, 1, marl::make_actor_critic(marl::make_layout(c.sim, c.train), 8, rng)};
  std::stringstream ss;
  write_checkpoint(ss, ck);
  EXPECT_EQ(ss.str().find("role bs"), std::string::npos);
  EXPECT_FALSE(read_checkpoint(ss).nets.bs.has_value());
}

TEST(Checkpoint, Malformed) {
  std::stringstream bad("not a checkpoint\n");
  EXPECT_THROW(read_checkpoint(bad), std::runtime_error);
  std::stringstream truncated("emac-checkpoint v1\nseed 1\nn_ue = 2\n");
  EXPECT_THROW(read_checkpoint(truncated), std::runtime_error);
}

TEST(Schedule, EvalPoints) {
  marl::TrainConfig t;
  t.episodes_train = 2000;
  t.eval_interval = 500;
  EXPECT_EQ(eval_schedule(t), (std::vector<int>{0, 500, 1000, 1500, 2000}));
  t.episodes_train = 1200;
  EXPECT_EQ(eval_schedule(t), (std::vector<int>{0, 500, 1000, 1200}));
}

TEST(Campaign, Validation) {
  Campaign c;
  c.train = tiny().train;
  EXPECT_THROW(c.validate(), ConfigError);
  c.grid = {env::reference_config()};
  c.repetitions = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Campaign, TwoRepetitionsDeterministic) {
  Campaign c;
  c.grid = {env::reference_config()};
  c.train = tiny().train;
  c.repetitions = 2;
  c.base_seed = 9;
  c.out_dir = scratch("campaign_a");
  c.workers = 2;
  const auto a = run_campaign(c);
  ASSERT_EQ(a.size(), 3u);  // two repetitions + baseline
  EXPECT_EQ(a[0].repetition, 0);
  EXPECT_EQ(a[1].repetition, 1);
  EXPECT_EQ(a[1].seed, 10u);
  EXPECT_EQ(a[2].solution, kBaselineSolution);
  for (const auto& r : a) EXPECT_TRUE(r.ok()) << r.error;
  EXPECT_TRUE(fs::exists(c.out_dir / a[0].checkpoint));
  EXPECT_TRUE(fs::exists(c.out_dir / a[1].checkpoint));

  const fs::path first = c.out_dir;
  c.out_dir = scratch("campaign_b");
  c.workers = 1;
  run_campaign(c);
  EXPECT_EQ(slurp(first / "records.csv"), slurp(c.out_dir / "records.csv"));
  EXPECT_EQ(slurp(first / a[1].checkpoint), slurp(c.out_dir / a[1].checkpoint));

  const auto loaded = load_records(first);
  ASSERT_EQ(loaded.size(), 3u);
  EXPECT_EQ(loaded[1].eval_trace, a[1].eval_trace);
  EXPECT_EQ(loaded[1].final_goodput, a[1].final_goodput);
}

TEST(Campaign, IoFailureIsPerRepetition) {
  Campaign c;
  c.grid = {env::reference_config()};
  c.train = tiny().train;
  c.train.episodes_train = 5;
  c.repetitions = 2;
  c.out_dir = scratch("campaign_io");
  // A regular file where repetition 1's directory should go.
  const fs::path blocked = c.out_dir / "maddpg_P2_tbler0.1" / "rep001";
  fs::create_directories(blocked.parent_path());
  std::ofstream(blocked) << "x";
  const auto rs = run_campaign(c);
  EXPECT_TRUE(rs[0].ok());
  EXPECT_FALSE(rs[1].ok());
  EXPECT_TRUE(rs[2].ok());
}

TEST(Report, ColumnsAndRowCounts) {
  ProtocolRecord r = record(0, 0.2);
  r.eval_trace = {{0, 0.1, 0.5, 24}, {10, 0.15, 0.8, 20}, {20, 0.2, 1.0, 10}};
  ProtocolRecord base = record(0, 0.3);
  base.solution = kBaselineSolution;
  base.eval_trace = {{0, 0.3, 1.0, 7}};
  const std::vector<ProtocolRecord> one{r};
  std::stringstream detail, summary, curves;
  write_detail(detail, one);
  write_summary(summary, one);
  write_curves(curves, one);
  const auto d = csv::read_table(detail);
  EXPECT_EQ(d.header, (std::vector<std::string>{"solution", "tbler", "P", "repetition", "train_episode",
                                                "goodput", "delivery_rate", "duration"}));
  EXPECT_EQ(d.rows.size(), 3u);
  EXPECT_EQ(csv::read_table(summary).rows.size(), 1u);
  EXPECT_EQ(csv::read_table(curves).rows.size(), 3u);

  const std::vector<ProtocolRecord> both{r, base};
  std::stringstream detail2;
  write_detail(detail2, both);
  const auto d2 = csv::read_table(detail2);
  ASSERT_EQ(d2.rows.size(), 4u);
  EXPECT_EQ(d2.rows.back()[0], "contention-free");
}

TEST(Report, SummaryPicksBestAndCi) {
  std::vector<ProtocolRecord> rs{record(0, 0.1), record(1, 0.3), record(2, 0.2)};
  rs[1].test_goodput = 0.29;
  std::stringstream out;
  write_summary(out, rs);
  const auto t = csv::read_table(out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][t.column("best_repetition")], "1");
  EXPECT_EQ(t.rows[0][t.column("best_test_goodput")], "0.29");
  EXPECT_NEAR(csv::parse_double(t.rows[0][t.column("mean_final_goodput")]), 0.2, 1e-15);
}

TEST(Sweep, BaselineDeliveryAndLosslessPoint) {
  env::SimConfig sim = env::reference_config();
  const std::vector<double> tblers{0.0, 0.1};
  const auto pts = sweep_baseline(sim, tblers, 3, 300, 1);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].delivery_rate.mean, 1.0);
  EXPECT_EQ(pts[0].repetitions, 3);
  EXPECT_GT(pts[0].goodput.mean, pts[1].goodput.mean);
  EXPECT_GT(pts[1].delivery_rate.mean, 0.999);
  std::stringstream out;
  write_sweep(out, pts);
  EXPECT_EQ(csv::read_table(out).rows.size(), 2u);
}

}  // namespace
}  // namespace emac::harness
