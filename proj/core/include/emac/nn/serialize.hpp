#pragma once

#include <iosfwd>

#include "emac/nn/mlp.hpp"

namespace emac::nn {

/// Text dump: a "mlp v1" tag, the layer dims, then each layer's weights in
/// row-major order followed by its biases. Values use shortest round-trip
/// decimal form, so a reload is bit-exact.
void write_mlp(std::ostream& out, const Mlp& mlp);

/// Throws std::runtime_error on malformed input.
Mlp read_mlp(std::istream& in);

}  // namespace emac::nn
