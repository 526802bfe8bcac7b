#pragma once

#include <filesystem>
#include <iosfwd>

#include "emac/env/types.hpp"
#include "emac/marl/config.hpp"

namespace emac::harness {

/// Everything a run needs besides the seed.
struct RunConfig {
  env::SimConfig sim;
  marl::TrainConfig train;

  bool operator==(const RunConfig&) const = default;
};

/// Reference environment with a training budget that fits on a desk:
/// 20k training episodes, evaluation every 500 episodes.
RunConfig desk_config();

/// `key = value` lines; `#` starts a comment. Keys are the SimConfig and
/// TrainConfig field names. Unknown keys, duplicates and malformed values
/// raise ConfigError. Missing keys keep their defaults from `base`.
RunConfig parse_config(std::istream& in, const RunConfig& base = {});
RunConfig load_config(const std::filesystem::path& path, const RunConfig& base = {});

/// Writes every key; parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const RunConfig& config);

}  // namespace emac::harness
