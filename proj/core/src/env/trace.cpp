#include "emac/env/trace.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "emac/csv.hpp"

namespace emac::env {

void write_trace_header(std::ostream& out, int n_ue) {
  out << "episode,t";
  for (int u = 1; u <= n_ue; ++u) {
    out << ",ue" << u << "_obs,ue" << u << "_action,ue" << u << "_ucm,ue" << u << "_dcm";
  }
  out << ",channel,new_rx,wrongful_deletions,reward\n";
}

void write_trace_rows(std::ostream& out, std::uint64_t episode, std::span<const TraceRow> rows) {
  for (const TraceRow& row : rows) {
    out << episode << ',' << row.t;
    for (std::size_t u = 0; u < row.obs.size(); ++u) {
      out << ',' << row.obs[u] << ',' << row.action[u] << ',' << row.ucm[u] << ',' << row.dcm[u];
    }
    out << ',' << row.channel << ',' << row.new_rx << ',' << row.wrongful_deletions << ','
        << row.reward << '\n';
  }
}

std::vector<EpisodeTrace> read_trace_csv(std::istream& in) {
  const csv::Table table = csv::read_table(in);
  if (table.header.size() < 6 || (table.header.size() - 6) % 4 != 0) {
    throw std::runtime_error("unexpected trace header");
  }
  const std::size_t n_ue = (table.header.size() - 6) / 4;
  std::vector<EpisodeTrace> episodes;
  for (const auto& fields : table.rows) {
    const auto episode = static_cast<std::uint64_t>(csv::parse_int(fields[0]));
    if (episodes.empty() || episodes.back().episode != episode) {
      episodes.push_back({episode, {}});
    }
    TraceRow row;
    row.t = static_cast<int>(csv::parse_int(fields[1]));
    for (std::size_t u = 0; u < n_ue; ++u) {
      const std::size_t base = 2 + 4 * u;
      row.obs.push_back(static_cast<int>(csv::parse_int(fields[base])));
      row.action.push_back(static_cast<int>(csv::parse_int(fields[base + 1])));
      row.ucm.push_back(static_cast<int>(csv::parse_int(fields[base + 2])));
      row.dcm.push_back(static_cast<int>(csv::parse_int(fields[base + 3])));
    }
    const std::size_t tail = 2 + 4 * n_ue;
    row.channel = static_cast<int>(csv::parse_int(fields[tail]));
    row.new_rx = static_cast<int>(csv::parse_int(fields[tail + 1]));
    row.wrongful_deletions = static_cast<int>(csv::parse_int(fields[tail + 2]));
    row.reward = static_cast<int>(csv::parse_int(fields[tail + 3]));
    episodes.back().rows.push_back(std::move(row));
  }
  return episodes;
}

TraceCounts recount(std::span<const TraceRow> rows) {
  TraceCounts counts;
  for (const TraceRow& row : rows) counts.n_rx += row.new_rx;
  counts.n_ttis = static_cast<int>(rows.size());
  return counts;
}

}  // namespace emac::env
