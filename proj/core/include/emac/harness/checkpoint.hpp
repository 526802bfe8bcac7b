#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "emac/harness/config_file.hpp"
#include "emac/marl/learner.hpp"

namespace emac::harness {

/// A trained protocol: its configuration, run seed and networks. Optimizer
/// state is not stored; a reload starts with fresh Adam moments.
struct Checkpoint {
  RunConfig config;
  std::uint64_t seed = 0;
  marl::ActorCritic nets;
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
/// Throws std::runtime_error on malformed input, ConfigError on a bad config
/// block and ShapeError when the networks do not fit the config.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace emac::harness
