#pragma once

#include <cstdint>

#include "emac/nn/mlp.hpp"

namespace emac::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  MlpGrads first_moment;
  MlpGrads second_moment;
  std::int64_t step = 0;
};

AdamState make_adam_state(const Mlp& mlp);

/// One bias-corrected Adam step (gradient descent). Throws NumericError on
/// non-finite gradients, ShapeError on mismatched shapes.
void adam_step(Mlp& mlp, const MlpGrads& grads, AdamState& state, const AdamOptions& options);

}  // namespace emac::nn
