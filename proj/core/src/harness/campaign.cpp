#include "emac/harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "emac/baseline/baseline.hpp"
#include "emac/csv.hpp"
#include "emac/env/environment.hpp"
#include "emac/errors.hpp"
#include "emac/marl/policy.hpp"

namespace emac::harness {
namespace fs = std::filesystem;
namespace {

std::string point_dir(const std::string& solution, const env::SimConfig& sim) {
  return solution + "_P" + std::to_string(sim.total_sdus) + "_tbler" + csv::format_double(sim.tbler);
}

std::string rep_dir(int repetition) {
  std::string digits = std::to_string(repetition);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return "rep" + digits;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

marl::EvalSummary test_protocol(const marl::ActorCritic& nets, const env::SimConfig& sim,
                                std::uint64_t seed, int episodes) {
  const auto seeds = marl::episode_seeds(seed, marl::kTestStream, static_cast<std::size_t>(episodes));
  return marl::evaluate(nets, sim, seeds);
}

marl::EvalSummary test_baseline(const env::SimConfig& sim, std::uint64_t seed, int episodes) {
  baseline::ContentionFreePolicy policy;
  const auto seeds = marl::episode_seeds(seed, marl::kTestStream, static_cast<std::size_t>(episodes));
  return marl::evaluate(policy, sim, seeds);
}

struct Job {
  std::size_t grid_index;
  int repetition;  // -1: baseline
};

ProtocolRecord run_job(const Campaign& campaign, const Job& job) {
  const env::SimConfig& sim = campaign.grid[job.grid_index];
  ProtocolRecord record;
  record.tbler = sim.tbler;
  record.sdus = sim.total_sdus;

  if (job.repetition < 0) {
    record.solution = kBaselineSolution;
    record.repetition = 0;
    record.seed = campaign.base_seed;
    const fs::path rel = fs::path(point_dir(record.solution, sim)) / "eval.csv";
    record.eval_csv = rel.generic_string();
    try {
      // The baseline does not learn: one evaluation repeated on the
      // protocols' schedule keeps the curves comparable.
      const auto eval_seeds = marl::episode_seeds(campaign.base_seed, marl::kEvalStream,
                                                  static_cast<std::size_t>(campaign.train.episodes_eval));
      baseline::ContentionFreePolicy policy;
      const marl::EvalSummary eval = marl::evaluate(policy, sim, eval_seeds);
      for (int episode : eval_schedule(campaign.train)) {
        record.eval_trace.push_back(
            {episode, eval.mean_goodput, eval.mean_delivery_rate, eval.mean_duration});
      }
      record.final_goodput = eval.mean_goodput;
      const marl::EvalSummary test = test_baseline(sim, record.seed, campaign.train.episodes_test);
      record.test_goodput = test.mean_goodput;
      record.test_delivery_rate = test.mean_delivery_rate;
      record.test_duration = test.mean_duration;
      fs::create_directories(campaign.out_dir / rel.parent_path());
      write_file(campaign.out_dir / rel,
                 [&](std::ostream& out) { write_eval_csv(out, record.eval_trace); });
    } catch (const std::exception& e) {
      record.error = e.what();
    }
    return record;
  }

  record.solution = solution_name(campaign.train.ablation);
  record.repetition = job.repetition;
  record.seed = repetition_seed(campaign.base_seed, job.repetition);
  const fs::path rel = fs::path(point_dir(record.solution, sim)) / rep_dir(job.repetition);
  record.checkpoint = (rel / "checkpoint.txt").generic_string();
  record.eval_csv = (rel / "eval.csv").generic_string();
  try {
    marl::TrainResult result = marl::train_run(sim, campaign.train, record.seed);
    record.eval_trace = result.eval_trace;
    record.final_goodput = result.eval_trace.back().mean_goodput;
    const marl::EvalSummary test =
        test_protocol(result.nets, sim, record.seed, campaign.train.episodes_test);
    record.test_goodput = test.mean_goodput;
    record.test_delivery_rate = test.mean_delivery_rate;
    record.test_duration = test.mean_duration;

    fs::create_directories(campaign.out_dir / rel);
    Checkpoint checkpoint{{sim, campaign.train}, record.seed, std::move(result.nets)};
    save_checkpoint(campaign.out_dir / record.checkpoint, checkpoint);
    write_file(campaign.out_dir / record.eval_csv,
               [&](std::ostream& out) { write_eval_csv(out, record.eval_trace); });
  } catch (const std::exception& e) {
    record.error = e.what();
  }
  return record;
}

std::string csv_text(std::string_view field) {
  // Error messages are the only free text; keep rows parseable.
  std::string out(field);
  std::replace(out.begin(), out.end(), ',', ';');
  std::replace(out.begin(), out.end(), '\n', ' ');
  return out;
}

}  // namespace

std::string solution_name(marl::Ablation ablation) {
  switch (ablation) {
    case marl::Ablation::Full:
      return "maddpg";
    case marl::Ablation::NoComm:
      return "nocomm";
    case marl::Ablation::Ddpg:
      return "ddpg";
  }
  return "unknown";
}

std::vector<env::SimConfig> reference_grid(const env::SimConfig& base) {
  std::vector<env::SimConfig> grid;
  for (int sdus : {1, 2}) {
    for (double tbler : {1e-1, 1e-2, 1e-3, 1e-4}) {
      env::SimConfig sim = base;
      sim.total_sdus = sdus;
      sim.tbler = tbler;
      grid.push_back(sim);
    }
  }
  return grid;
}

void Campaign::validate() const {
  if (grid.empty()) throw ConfigError("campaign grid is empty");
  if (repetitions < 1) throw ConfigError("campaign needs at least one repetition");
  if (workers < 1) throw ConfigError("campaign needs at least one worker");
  for (const auto& sim : grid) sim.validate();
  train.validate();
}

std::vector<int> eval_schedule(const marl::TrainConfig& train) {
  std::vector<int> points{0};
  for (int e = train.eval_interval; e < train.episodes_train; e += train.eval_interval) {
    points.push_back(e);
  }
  if (train.episodes_train > 0) points.push_back(train.episodes_train);
  return points;
}

std::uint64_t repetition_seed(std::uint64_t base_seed, int repetition) {
  return base_seed + static_cast<std::uint64_t>(repetition);
}

std::vector<ProtocolRecord> run_campaign(const Campaign& campaign, const ProgressFn& progress) {
  campaign.validate();
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < campaign.grid.size(); ++g) {
    for (int r = 0; r < campaign.repetitions; ++r) jobs.push_back({g, r});
  }
  if (campaign.include_baseline) {
    for (std::size_t g = 0; g < campaign.grid.size(); ++g) jobs.push_back({g, -1});
  }

  fs::create_directories(campaign.out_dir);
  std::vector<ProtocolRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      records[i] = run_job(campaign, jobs[i]);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(records[i]);
      }
    }
  };
  const int threads = std::min<int>(campaign.workers, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  write_file(campaign.out_dir / "records.csv",
             [&](std::ostream& out) { write_records(out, records); });
  return records;
}

const ProtocolRecord& select_best(std::span<const ProtocolRecord> records) {
  const ProtocolRecord* best = nullptr;
  for (const auto& record : records) {
    if (!record.ok()) continue;
    if (best == nullptr || record.final_goodput > best->final_goodput ||
        (record.final_goodput == best->final_goodput && record.repetition < best->repetition)) {
      best = &record;
    }
  }
  if (best == nullptr) throw UsageError("select_best: no successful records");
  return *best;
}

void write_records(std::ostream& out, std::span<const ProtocolRecord> records) {
  csv::write_row(out, {"solution", "tbler", "P", "repetition", "seed", "checkpoint", "eval_csv",
                       "final_goodput", "test_goodput", "test_delivery_rate", "test_duration",
                       "error"});
  for (const auto& r : records) {
    csv::write_row(out, {r.solution, csv::format_double(r.tbler), std::to_string(r.sdus),
                         std::to_string(r.repetition), std::to_string(r.seed), r.checkpoint,
                         r.eval_csv, csv::format_double(r.final_goodput),
                         csv::format_double(r.test_goodput), csv::format_double(r.test_delivery_rate),
                         csv::format_double(r.test_duration), csv_text(r.error)});
  }
}

void write_eval_csv(std::ostream& out, std::span<const marl::EvalPoint> points) {
  csv::write_row(out, {"train_episode", "goodput", "delivery_rate", "duration"});
  for (const auto& p : points) {
    csv::write_row(out, {std::to_string(p.train_episode), csv::format_double(p.mean_goodput),
                         csv::format_double(p.mean_delivery_rate),
                         csv::format_double(p.mean_duration)});
  }
}

std::vector<marl::EvalPoint> read_eval_csv(std::istream& in) {
  const csv::Table table = csv::read_table(in);
  const auto c_ep = table.column("train_episode");
  const auto c_g = table.column("goodput");
  const auto c_d = table.column("delivery_rate");
  const auto c_t = table.column("duration");
  std::vector<marl::EvalPoint> points;
  for (const auto& row : table.rows) {
    points.push_back({static_cast<int>(csv::parse_int(row[c_ep])), csv::parse_double(row[c_g]),
                      csv::parse_double(row[c_d]), csv::parse_double(row[c_t])});
  }
  return points;
}

std::vector<ProtocolRecord> load_records(const fs::path& dir) {
  std::ifstream in(dir / "records.csv");
  if (!in) throw std::runtime_error("cannot open " + (dir / "records.csv").string());
  const csv::Table table = csv::read_table(in);
  const auto col = [&table](const char* name) { return table.column(name); };
  const auto c_sol = col("solution"), c_tb = col("tbler"), c_p = col("P"), c_rep = col("repetition"),
             c_seed = col("seed"), c_ck = col("checkpoint"), c_ev = col("eval_csv"),
             c_fg = col("final_goodput"), c_tg = col("test_goodput"),
             c_td = col("test_delivery_rate"), c_tt = col("test_duration"), c_err = col("error");
  std::vector<ProtocolRecord> records;
  for (const auto& row : table.rows) {
    ProtocolRecord r;
    r.solution = row[c_sol];
    r.tbler = csv::parse_double(row[c_tb]);
    r.sdus = static_cast<int>(csv::parse_int(row[c_p]));
    r.repetition = static_cast<int>(csv::parse_int(row[c_rep]));
    r.seed = std::stoull(row[c_seed]);
    r.checkpoint = row[c_ck];
    r.eval_csv = row[c_ev];
    r.final_goodput = csv::parse_double(row[c_fg]);
    r.test_goodput = csv::parse_double(row[c_tg]);
    r.test_delivery_rate = csv::parse_double(row[c_td]);
    r.test_duration = csv::parse_double(row[c_tt]);
    r.error = row[c_err];
    if (r.ok() && !r.eval_csv.empty()) {
      std::ifstream eval_in(dir / r.eval_csv);
      if (!eval_in) throw std::runtime_error("cannot open " + (dir / r.eval_csv).string());
      r.eval_trace = read_eval_csv(eval_in);
    }
    records.push_back(std::move(r));
  }
  return records;
}

MeanCi mean_ci(std::span<const double> values) {
  MeanCi ci;
  ci.n = static_cast<int>(values.size());
  if (values.empty()) return ci;
  double sum = 0.0;
  for (double v : values) sum += v;
  ci.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return ci;
  double ss = 0.0;
  for (double v : values) ss += (v - ci.mean) * (v - ci.mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  ci.half_width = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  return ci;
}

namespace {

SweepPoint summarize(std::string solution, const env::SimConfig& sim,
                     const std::vector<marl::EvalSummary>& reps) {
  std::vector<double> g, d, t;
  for (const auto& s : reps) {
    g.push_back(s.mean_goodput);
    d.push_back(s.mean_delivery_rate);
    t.push_back(s.mean_duration);
  }
  return {std::move(solution), sim.tbler, sim.total_sdus, static_cast<int>(reps.size()),
          mean_ci(g), mean_ci(d), mean_ci(t)};
}

}  // namespace

std::vector<SweepPoint> sweep_baseline(const env::SimConfig& base, std::span<const double> tblers,
                                       int repetitions, int episodes, std::uint64_t base_seed) {
  if (repetitions < 1 || episodes < 1) throw ConfigError("sweep needs repetitions and episodes >= 1");
  std::vector<SweepPoint> points;
  for (double tbler : tblers) {
    env::SimConfig sim = base;
    sim.tbler = tbler;
    sim.validate();
    std::vector<marl::EvalSummary> reps;
    for (int r = 0; r < repetitions; ++r) {
      reps.push_back(test_baseline(sim, repetition_seed(base_seed, r), episodes));
    }
    points.push_back(summarize(kBaselineSolution, sim, reps));
  }
  return points;
}

std::vector<SweepPoint> sweep_checkpoints(std::span<const Checkpoint> checkpoints,
                                          std::span<const double> tblers, int sdus, int episodes,
                                          std::uint64_t base_seed) {
  if (checkpoints.empty()) throw UsageError("sweep needs at least one checkpoint");
  if (episodes < 1) throw ConfigError("sweep needs episodes >= 1");
  std::vector<SweepPoint> points;
  for (double tbler : tblers) {
    std::vector<marl::EvalSummary> reps;
    env::SimConfig shown;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      env::SimConfig sim = checkpoints[i].config.sim;
      sim.tbler = tbler;
      if (sdus > 0) sim.total_sdus = sdus;
      sim.validate();
      shown = sim;
      reps.push_back(test_protocol(checkpoints[i].nets, sim,
                                   repetition_seed(base_seed, static_cast<int>(i)), episodes));
    }
    points.push_back(summarize(solution_name(checkpoints.front().config.train.ablation), shown, reps));
  }
  return points;
}

void write_sweep(std::ostream& out, std::span<const SweepPoint> points) {
  csv::write_row(out, {"solution", "tbler", "P", "repetitions", "goodput", "goodput_ci95",
                       "delivery_rate", "delivery_rate_ci95", "duration", "duration_ci95",
                       "ci_method"});
  for (const auto& p : points) {
    csv::write_row(out, {p.solution, csv::format_double(p.tbler), std::to_string(p.sdus),
                         std::to_string(p.repetitions), csv::format_double(p.goodput.mean),
                         csv::format_double(p.goodput.half_width),
                         csv::format_double(p.delivery_rate.mean),
                         csv::format_double(p.delivery_rate.half_width),
                         csv::format_double(p.duration.mean),
                         csv::format_double(p.duration.half_width), "normal95"});
  }
}

}  // namespace emac::harness
