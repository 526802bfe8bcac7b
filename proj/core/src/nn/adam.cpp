#include "emac/nn/adam.hpp"

#include <cmath>

#include "emac/errors.hpp"

namespace emac::nn {

AdamState make_adam_state(const Mlp& mlp) {
  return {mlp.zeros_like(), mlp.zeros_like(), 0};
}

void adam_step(Mlp& mlp, const MlpGrads& grads, AdamState& state, const AdamOptions& options) {
  if (grads.layers.size() != mlp.layer_count() ||
      state.first_moment.layers.size() != mlp.layer_count()) {
    throw ShapeError("adam_step: gradient/state layout does not match the network");
  }
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    const DenseLayer& layer = mlp.layer(l);
    if (grads.layers[l].weight.rows() != layer.weight.rows() ||
        grads.layers[l].weight.cols() != layer.weight.cols() ||
        grads.layers[l].bias.size() != layer.bias.size()) {
      throw ShapeError("adam_step: gradient shape mismatch");
    }
  }
  if (!grads.all_finite()) throw NumericError("adam_step: non-finite gradient");

  ++state.step;
  const double b1 = options.beta1;
  const double b2 = options.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double lr = options.learning_rate;
  const double eps = options.epsilon;

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = b1 * m.array() + (1.0 - b1) * g.array();
    v = b2 * v.array() + (1.0 - b2) * g.array().square();
    param.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
  };

  auto& layers = mlp.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weight, grads.layers[l].weight, state.first_moment.layers[l].weight,
           state.second_moment.layers[l].weight);
    update(layers[l].bias, grads.layers[l].bias, state.first_moment.layers[l].bias,
           state.second_moment.layers[l].bias);
  }
}

}  // namespace emac::nn
