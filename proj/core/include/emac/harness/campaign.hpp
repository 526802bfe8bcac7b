#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "emac/harness/checkpoint.hpp"
#include "emac/harness/config_file.hpp"
#include "emac/marl/train.hpp"

namespace emac::harness {

inline constexpr const char* kBaselineSolution = "contention-free";

/// "maddpg", "nocomm" or "ddpg".
std::string solution_name(marl::Ablation ablation);

/// Environment grid of the reference study: P in {1, 2} times TBLER in
/// {1e-1, 1e-2, 1e-3, 1e-4}, everything else from `base`.
std::vector<env::SimConfig> reference_grid(const env::SimConfig& base);

struct Campaign {
  std::vector<env::SimConfig> grid;
  marl::TrainConfig train;
  int repetitions = 1;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir;
  int workers = 1;
  bool include_baseline = true;

  /// Throws ConfigError on an empty grid, repetitions < 1 or workers < 1.
  void validate() const;
};

/// Outcome of one training repetition (or of the baseline at a grid point).
/// Paths are relative to the campaign output directory.
struct ProtocolRecord {
  std::string solution;
  double tbler = 0.0;
  int sdus = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::string checkpoint;  // empty for the baseline
  std::string eval_csv;
  std::vector<marl::EvalPoint> eval_trace;
  double final_goodput = 0.0;  // last evaluation round
  double test_goodput = 0.0;
  double test_delivery_rate = 0.0;
  double test_duration = 0.0;
  std::string error;  // non-empty when the repetition failed

  bool ok() const { return error.empty(); }
};

/// Training episodes after which evaluation happens.
std::vector<int> eval_schedule(const marl::TrainConfig& train);

/// Seed of repetition `r`. Each run further splits it into its own streams.
std::uint64_t repetition_seed(std::uint64_t base_seed, int repetition);

using ProgressFn = std::function<void(const ProtocolRecord&)>;

/// Trains every (grid point, repetition) pair on a pool of `workers` threads,
/// tests each result greedily on episodes_test episodes and writes
///   <out>/<solution>_P<P>_tbler<t>/rep<r>/{checkpoint.txt,eval.csv}
///   <out>/records.csv
/// Failures are recorded in ProtocolRecord::error; other repetitions go on.
/// Records are ordered by grid point, then repetition, baseline last.
std::vector<ProtocolRecord> run_campaign(const Campaign& campaign, const ProgressFn& progress = {});

/// Best successful record by final evaluation goodput; ties go to the lowest
/// repetition id. Throws UsageError when nothing qualifies.
const ProtocolRecord& select_best(std::span<const ProtocolRecord> records);

void write_records(std::ostream& out, std::span<const ProtocolRecord> records);
void write_eval_csv(std::ostream& out, std::span<const marl::EvalPoint> points);
std::vector<marl::EvalPoint> read_eval_csv(std::istream& in);

/// Reads <dir>/records.csv and every referenced eval.csv.
std::vector<ProtocolRecord> load_records(const std::filesystem::path& dir);

/// Mean and 95% normal-approximation half width 1.96 * s / sqrt(n), with s
/// the sample standard deviation. The half width is 0 for fewer than two values.
struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
  int n = 0;
};
MeanCi mean_ci(std::span<const double> values);

struct SweepPoint {
  std::string solution;
  double tbler = 0.0;
  int sdus = 0;
  int repetitions = 0;
  MeanCi goodput;
  MeanCi delivery_rate;
  MeanCi duration;
};

/// Baseline at each TBLER: repetition r runs `episodes` test episodes seeded
/// from repetition_seed(base_seed, r); statistics are across repetition means.
std::vector<SweepPoint> sweep_baseline(const env::SimConfig& base, std::span<const double> tblers,
                                       int repetitions, int episodes, std::uint64_t base_seed);

/// Greedy evaluation of trained protocols at each TBLER, one repetition per
/// checkpoint. The checkpoints' environment settings are kept except TBLER
/// and, when sdus > 0, the SDU count.
std::vector<SweepPoint> sweep_checkpoints(std::span<const Checkpoint> checkpoints,
                                          std::span<const double> tblers, int sdus, int episodes,
                                          std::uint64_t base_seed);

void write_sweep(std::ostream& out, std::span<const SweepPoint> points);

}  // namespace emac::harness
