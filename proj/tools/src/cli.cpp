#include "emac/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "emac/baseline/baseline.hpp"
#include "emac/csv.hpp"
#include "emac/env/environment.hpp"
#include "emac/env/trace.hpp"
#include "emac/harness/campaign.hpp"
#include "emac/harness/checkpoint.hpp"
#include "emac/harness/config_file.hpp"
#include "emac/harness/report.hpp"
#include "emac/marl/policy.hpp"
#include "emac/marl/train.hpp"

namespace emac::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

harness::RunConfig config_or_desk(const std::string& path) {
  return path.empty() ? harness::desk_config() : harness::load_config(path, harness::desk_config());
}

/// Runs `policy` on the test seeds of `seed`; optionally logs one CSV row per
/// episode and the per-TTI trace. Returns the aggregate.
marl::EvalSummary run_logged(env::Policy& policy, const env::SimConfig& sim, std::uint64_t seed,
                             int episodes, const std::string& episodes_csv,
                             const std::string& trace_csv) {
  const auto seeds = marl::episode_seeds(seed, marl::kTestStream, static_cast<std::size_t>(episodes));
  std::optional<std::ofstream> log, trace;
  if (!episodes_csv.empty()) {
    log = open_out(episodes_csv);
    csv::write_row(*log, {"episode", "seed", "n_rx", "n_ttis", "n_generated", "dropped",
                          "collisions", "erasures", "wrongful_deletions", "goodput",
                          "delivery_rate"});
  }
  if (!trace_csv.empty()) {
    trace = open_out(trace_csv);
    env::write_trace_header(*trace, sim.n_ue);
  }

  marl::EvalSummary summary;
  std::vector<env::TraceRow> rows;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    rows.clear();
    const env::EpisodeStats stats = env::run_episode(policy, sim, seeds[i], trace ? &rows : nullptr);
    const double g = env::goodput(stats);
    const double d = env::delivery_rate(stats, sim);
    summary.mean_goodput += g;
    summary.mean_delivery_rate += d;
    summary.mean_duration += stats.n_ttis;
    summary.episodes.push_back(stats);
    if (log) {
      csv::write_row(*log, {std::to_string(i), std::to_string(seeds[i]), std::to_string(stats.n_rx),
                            std::to_string(stats.n_ttis), std::to_string(stats.n_generated),
                            std::to_string(stats.dropped), std::to_string(stats.collisions),
                            std::to_string(stats.erasures), std::to_string(stats.wrongful_deletions),
                            csv::format_double(g), csv::format_double(d)});
    }
    if (trace) env::write_trace_rows(*trace, i, rows);
  }
  const double n = static_cast<double>(seeds.size());
  summary.mean_goodput /= n;
  summary.mean_delivery_rate /= n;
  summary.mean_duration /= n;
  return summary;
}

void print_summary(std::ostream& out, const std::string& solution, const env::SimConfig& sim,
                   const marl::EvalSummary& s) {
  int collisions = 0, wrongful = 0;
  for (const auto& e : s.episodes) {
    collisions += e.collisions;
    wrongful += e.wrongful_deletions;
  }
  csv::write_row(out, {"solution", "tbler", "P", "episodes", "goodput", "delivery_rate", "duration",
                       "collisions", "wrongful_deletions"});
  csv::write_row(out, {solution, csv::format_double(sim.tbler), std::to_string(sim.total_sdus),
                       std::to_string(s.episodes.size()), csv::format_double(s.mean_goodput),
                       csv::format_double(s.mean_delivery_rate), csv::format_double(s.mean_duration),
                       std::to_string(collisions), std::to_string(wrongful)});
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Emergent MAC protocol workbench"};
  app.require_subcommand(1);

  // train
  std::string train_config, train_out, train_ablation;
  std::uint64_t train_seed = 0;
  int train_reps = 1, train_workers = 1;
  bool train_grid = false, train_no_baseline = false;
  auto* train = app.add_subcommand("train", "Train protocols over seeded repetitions");
  train->add_option("--config", train_config, "Config file (key = value)");
  train->add_option("--seed", train_seed, "Base seed");
  train->add_option("--reps", train_reps, "Repetitions")->check(CLI::PositiveNumber);
  train->add_option("--out", train_out, "Output directory")->required();
  train->add_option("--ablation", train_ablation, "full, nocomm or ddpg")
      ->check(CLI::IsMember({"full", "nocomm", "ddpg"}));
  train->add_option("--workers", train_workers, "Parallel repetitions")->check(CLI::PositiveNumber);
  train->add_flag("--grid", train_grid, "Run the P x TBLER reference grid");
  train->add_flag("--no-baseline", train_no_baseline, "Skip the baseline records");

  // eval
  std::string eval_checkpoint, eval_out, eval_trace;
  int eval_episodes = 0;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "Greedy test episodes of a trained protocol");
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
  eval->add_option("--episodes", eval_episodes, "Test episodes (default: episodes_test)");
  eval->add_option("--seed", eval_seed, "Seed of the test episodes");
  eval->add_option("--out", eval_out, "Per-episode CSV");
  eval->add_option("--trace", eval_trace, "Per-TTI trace CSV");

  // baseline
  std::string base_config, base_out, base_trace;
  int base_episodes = 5000;
  std::uint64_t base_seed = 0;
  std::optional<double> base_tbler;
  std::optional<int> base_sdus;
  auto* base = app.add_subcommand("baseline", "Run the contention-free baseline");
  base->add_option("--config", base_config, "Config file (key = value)");
  base->add_option("--episodes", base_episodes, "Episodes")->check(CLI::PositiveNumber);
  base->add_option("--seed", base_seed, "Seed of the episodes");
  base->add_option("--tbler", base_tbler, "Override TBLER");
  base->add_option("--sdus", base_sdus, "Override SDUs per UE");
  base->add_option("--out", base_out, "Per-episode CSV");
  base->add_option("--trace", base_trace, "Per-TTI trace CSV");

  // sweep
  std::vector<double> sweep_tblers{1e-1, 1e-2, 1e-3, 1e-4};
  int sweep_sdus = 0, sweep_episodes = 0, sweep_reps = 1;
  std::string sweep_config, sweep_out;
  std::vector<std::string> sweep_checkpoints;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "Goodput versus TBLER with 95% intervals");
  sweep->add_option("--tbler", sweep_tblers, "Comma separated TBLER list")->delimiter(',');
  sweep->add_option("--sdus", sweep_sdus, "SDUs per UE (default: from config)");
  sweep->add_option("--config", sweep_config, "Config file for the baseline sweep");
  sweep->add_option("--episodes", sweep_episodes, "Test episodes per point (default: episodes_test)");
  sweep->add_option("--reps", sweep_reps, "Baseline repetitions")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "Base seed");
  sweep->add_option("--checkpoint", sweep_checkpoints, "Trained checkpoints (one per repetition)");
  sweep->add_option("--out", sweep_out, "Output CSV (default: stdout)");

  // report
  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "Detail, summary and curve CSVs of a campaign");
  report->add_option("--in", report_in, "Campaign directory")->required();
  report->add_option("--out", report_out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train) {
      harness::RunConfig config = config_or_desk(train_config);
      if (!train_ablation.empty()) config.train.ablation = marl::parse_ablation(train_ablation);
      harness::Campaign campaign;
      campaign.grid = train_grid ? harness::reference_grid(config.sim)
                                 : std::vector<env::SimConfig>{config.sim};
      campaign.train = config.train;
      campaign.repetitions = train_reps;
      campaign.base_seed = train_seed;
      campaign.out_dir = train_out;
      campaign.workers = train_workers;
      campaign.include_baseline = !train_no_baseline;
      const auto records = harness::run_campaign(campaign, [&err](const harness::ProtocolRecord& r) {
        err << r.solution << " P=" << r.sdus << " tbler=" << csv::format_double(r.tbler)
            << " rep=" << r.repetition
            << (r.ok() ? " goodput=" + csv::format_double(r.final_goodput) : " failed: " + r.error)
            << '\n';
      });
      harness::write_records(out, records);
      for (const auto& r : records) {
        if (!r.ok()) return 1;
      }
      return 0;
    }

    if (*eval) {
      const harness::Checkpoint checkpoint = harness::load_checkpoint(eval_checkpoint);
      const int episodes = eval_episodes > 0 ? eval_episodes : checkpoint.config.train.episodes_test;
      marl::ActorPolicy policy(checkpoint.nets, marl::ActionMode::Greedy);
      const auto summary =
          run_logged(policy, checkpoint.config.sim, eval_seed, episodes, eval_out, eval_trace);
      print_summary(out, harness::solution_name(checkpoint.config.train.ablation),
                    checkpoint.config.sim, summary);
      return 0;
    }

    if (*base) {
      harness::RunConfig config = config_or_desk(base_config);
      if (base_tbler) config.sim.tbler = *base_tbler;
      if (base_sdus) config.sim.total_sdus = *base_sdus;
      config.sim.validate();
      baseline::ContentionFreePolicy policy;
      const auto summary =
          run_logged(policy, config.sim, base_seed, base_episodes, base_out, base_trace);
      print_summary(out, harness::kBaselineSolution, config.sim, summary);
      return 0;
    }

    if (*sweep) {
      std::vector<harness::SweepPoint> points;
      if (sweep_checkpoints.empty()) {
        harness::RunConfig config = config_or_desk(sweep_config);
        if (sweep_sdus > 0) config.sim.total_sdus = sweep_sdus;
        const int episodes = sweep_episodes > 0 ? sweep_episodes : config.train.episodes_test;
        points = harness::sweep_baseline(config.sim, sweep_tblers, sweep_reps, episodes, sweep_seed);
      } else {
        std::vector<harness::Checkpoint> checkpoints;
        for (const auto& path : sweep_checkpoints) checkpoints.push_back(harness::load_checkpoint(path));
        const int episodes =
            sweep_episodes > 0 ? sweep_episodes : checkpoints.front().config.train.episodes_test;
        points = harness::sweep_checkpoints(checkpoints, sweep_tblers, sweep_sdus, episodes, sweep_seed);
      }
      if (sweep_out.empty()) {
        harness::write_sweep(out, points);
      } else {
        auto file = open_out(sweep_out);
        harness::write_sweep(file, points);
      }
      return 0;
    }

    if (*report) {
      const auto records = harness::load_records(report_in);
      harness::emit_report(records, report_out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace emac::cli
