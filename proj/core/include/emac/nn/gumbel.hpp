#pragma once

#include <span>
#include <vector>

#include "emac/rng.hpp"

namespace emac::nn {

std::vector<double> softmax(std::span<const double> logits);

/// softmax((logits + noise) / temperature)
std::vector<double> gumbel_softmax(std::span<const double> logits, std::span<const double> noise,
                                   double temperature);

/// Draws standard Gumbel noise per logit and applies gumbel_softmax.
std::vector<double> gumbel_softmax_sample(std::span<const double> logits, double temperature,
                                          Rng& rng);

/// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

}  // namespace emac::nn
