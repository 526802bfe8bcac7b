#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "emac/harness/campaign.hpp"

namespace emac::harness {

/// One row per evaluation point per successful record, columns
/// solution, tbler, P, repetition, train_episode, goodput, delivery_rate, duration.
void write_detail(std::ostream& out, std::span<const ProtocolRecord> records);

/// One row per (solution, tbler, P): the selected best repetition and the
/// spread of final evaluation goodput across repetitions.
void write_summary(std::ostream& out, std::span<const ProtocolRecord> records);

/// Learning curves: per (solution, tbler, P, train_episode) means and 95%
/// half widths across repetitions.
void write_curves(std::ostream& out, std::span<const ProtocolRecord> records);

/// Writes detail.csv, summary.csv and curves.csv into `out_dir`.
void emit_report(std::span<const ProtocolRecord> records, const std::filesystem::path& out_dir);

}  // namespace emac::harness
