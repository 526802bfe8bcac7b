#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "emac/rng.hpp"

namespace emac::nn {

/// Fully connected layer; `weight` is (out x in).
struct DenseLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Gradient (or optimizer moment) with the same shapes as an Mlp.
struct MlpGrads {
  std::vector<DenseLayer> layers;

  MlpGrads& operator+=(const MlpGrads& other);
  MlpGrads& operator*=(double scale);
  bool all_finite() const;
};

/// Multilayer perceptron with ReLU hidden layers and a linear output layer.
///
/// Every mutation draws a fresh revision id from a process-wide counter, so
/// a ForwardCache can tell whether it was produced by exactly these
/// parameters. Copies share the revision until one of them is mutated.
class Mlp {
 public:
  Mlp() = default;

  /// Zero-initialized network. Throws ConfigError for fewer than two
  /// dimensions or a non-positive width.
  explicit Mlp(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  std::size_t layer_count() const { return layers_.size(); }
  std::size_t parameter_count() const;

  const DenseLayer& layer(std::size_t i) const { return layers_[i]; }
  DenseLayer& mutable_layer(std::size_t i);
  std::vector<DenseLayer>& mutable_layers();

  std::uint64_t revision() const { return revision_; }
  bool all_finite() const;

  MlpGrads zeros_like() const;

  /// Same dims and bit-identical parameters.
  bool same_parameters(const Mlp& other) const;

 private:
  void touch();

  std::vector<int> dims_;
  std::vector<DenseLayer> layers_;
  std::uint64_t revision_ = 0;
};

/// Weights uniform in +/- 1/sqrt(fan_in), biases zero.
Mlp init_mlp(std::span<const int> dims, Rng& rng);

/// Activations kept for backpropagation. inputs[l] is the input of layer l.
struct ForwardCache {
  std::uint64_t revision = 0;
  std::vector<Eigen::MatrixXd> inputs;
};

struct ForwardResult {
  Eigen::MatrixXd output;  // output_dim x batch
  ForwardCache cache;
};

/// Batched forward pass; each column of `input` is one sample.
ForwardResult forward(const Mlp& mlp, const Eigen::MatrixXd& input);

/// Forward pass without a cache.
Eigen::MatrixXd predict(const Mlp& mlp, const Eigen::MatrixXd& input);
Eigen::VectorXd predict(const Mlp& mlp, std::span<const double> input);

struct Gradients {
  MlpGrads params;
  Eigen::MatrixXd input;
};

/// Gradients of sum(output .* output_grad) with respect to all parameters and
/// the input. Throws UsageError when the cache does not belong to `mlp`.
Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad);

/// Input gradient only.
Eigen::MatrixXd backward_input(const Mlp& mlp, const ForwardCache& cache,
                               const Eigen::MatrixXd& output_grad);

/// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(Mlp& target, const Mlp& online, double tau);

}  // namespace emac::nn
