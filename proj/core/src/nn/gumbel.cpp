#include "emac/nn/gumbel.hpp"

#include <algorithm>
#include <cmath>

#include "emac/errors.hpp"

namespace emac::nn {

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

std::vector<double> gumbel_softmax(std::span<const double> logits, std::span<const double> noise,
                                   double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("Gumbel-softmax temperature must be positive");
  if (noise.size() != logits.size()) throw ShapeError("noise and logits differ in length");
  std::vector<double> scaled(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) scaled[i] = (logits[i] + noise[i]) / temperature;
  return softmax(scaled);
}

std::vector<double> gumbel_softmax_sample(std::span<const double> logits, double temperature,
                                          Rng& rng) {
  std::vector<double> noise(logits.size());
  for (double& g : noise) g = rng.gumbel();
  return gumbel_softmax(logits, noise, temperature);
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw UsageError("argmax of an empty range");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace emac::nn
