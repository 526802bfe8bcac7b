#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace emac::env {

/// One TTI of an episode.
struct TraceRow {
  int t = 0;
  std::vector<int> obs;     // buffer length each UE acted on
  std::vector<int> action;  // EnvAction per UE
  std::vector<int> ucm;
  std::vector<int> dcm;     // DCM sent to each UE this TTI
  int channel = 0;          // BS channel observation
  int new_rx = 0;           // 1 when a not-yet-received SDU was decoded
  int wrongful_deletions = 0;
  int reward = 0;

  bool operator==(const TraceRow&) const = default;
};

struct EpisodeTrace {
  std::uint64_t episode = 0;
  std::vector<TraceRow> rows;
};

/// Header: episode,t,ue1_obs,ue1_action,ue1_ucm,ue1_dcm,...,channel,new_rx,wrongful_deletions,reward
void write_trace_header(std::ostream& out, int n_ue);
void write_trace_rows(std::ostream& out, std::uint64_t episode, std::span<const TraceRow> rows);

std::vector<EpisodeTrace> read_trace_csv(std::istream& in);

/// N_RX and N_TTIs recounted from the rows alone.
struct TraceCounts {
  int n_rx = 0;
  int n_ttis = 0;
};
TraceCounts recount(std::span<const TraceRow> rows);

}  // namespace emac::env
