#pragma once

#include <iosfwd>

namespace emac::cli {

/// Entry point of the `emac` tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emac::cli
