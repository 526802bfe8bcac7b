#include "emac/nn/mlp.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "emac/errors.hpp"

namespace emac::nn {

namespace {

std::atomic<std::uint64_t> next_revision{1};

void check_same_shapes(const std::vector<DenseLayer>& a, const std::vector<DenseLayer>& b) {
  if (a.size() != b.size()) throw ShapeError("layer count mismatch");
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (a[l].weight.rows() != b[l].weight.rows() || a[l].weight.cols() != b[l].weight.cols() ||
        a[l].bias.size() != b[l].bias.size()) {
      throw ShapeError("layer " + std::to_string(l) + " shape mismatch");
    }
  }
}

void check_cache(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad) {
  if (cache.revision != mlp.revision() || cache.inputs.size() != mlp.layer_count()) {
    throw UsageError("forward cache does not belong to this network");
  }
  if (output_grad.rows() != mlp.output_dim() || output_grad.cols() != cache.inputs.front().cols()) {
    throw ShapeError("output gradient shape does not match the cached forward pass");
  }
}

}  // namespace

MlpGrads& MlpGrads::operator+=(const MlpGrads& other) {
  check_same_shapes(layers, other.layers);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weight += other.layers[l].weight;
    layers[l].bias += other.layers[l].bias;
  }
  return *this;
}

MlpGrads& MlpGrads::operator*=(double scale) {
  for (auto& layer : layers) {
    layer.weight *= scale;
    layer.bias *= scale;
  }
  return *this;
}

bool MlpGrads::all_finite() const {
  for (const auto& layer : layers) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

Mlp::Mlp(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw ConfigError("an MLP needs at least input and output dims");
  for (int d : dims_) {
    if (d <= 0) throw ConfigError("MLP layer widths must be positive");
  }
  layers_.resize(dims_.size() - 1);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    layers_[l].weight = Eigen::MatrixXd::Zero(dims_[l + 1], dims_[l]);
    layers_[l].bias = Eigen::VectorXd::Zero(dims_[l + 1]);
  }
  touch();
}

std::size_t Mlp::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers_) {
    count += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  }
  return count;
}

DenseLayer& Mlp::mutable_layer(std::size_t i) {
  touch();
  return layers_.at(i);
}

std::vector<DenseLayer>& Mlp::mutable_layers() {
  touch();
  return layers_;
}

bool Mlp::all_finite() const {
  for (const auto& layer : layers_) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

MlpGrads Mlp::zeros_like() const {
  MlpGrads grads;
  grads.layers.reserve(layers_.size());
  for (const auto& layer : layers_) {
    grads.layers.push_back({Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
                            Eigen::VectorXd::Zero(layer.bias.size())});
  }
  return grads;
}

bool Mlp::same_parameters(const Mlp& other) const {
  if (dims_ != other.dims_) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].weight != other.layers_[l].weight || layers_[l].bias != other.layers_[l].bias) {
      return false;
    }
  }
  return true;
}

void Mlp::touch() { revision_ = next_revision.fetch_add(1, std::memory_order_relaxed); }

Mlp init_mlp(std::span<const int> dims, Rng& rng) {
  Mlp mlp(std::vector<int>(dims.begin(), dims.end()));
  for (auto& layer : mlp.mutable_layers()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.cols()));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = (2.0 * rng.uniform() - 1.0) * bound;
      }
    }
  }
  return mlp;
}

ForwardResult forward(const Mlp& mlp, const Eigen::MatrixXd& input) {
  if (input.rows() != mlp.input_dim()) throw ShapeError("input has the wrong number of rows");
  ForwardResult result;
  result.cache.revision = mlp.revision();
  result.cache.inputs.reserve(mlp.layer_count());
  result.cache.inputs.push_back(input);
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    const DenseLayer& layer = mlp.layer(l);
    Eigen::MatrixXd z = layer.weight * result.cache.inputs.back();
    z.colwise() += layer.bias;
    if (l + 1 < mlp.layer_count()) {
      result.cache.inputs.push_back(z.cwiseMax(0.0));
    } else {
      result.output = std::move(z);
    }
  }
  return result;
}

Eigen::MatrixXd predict(const Mlp& mlp, const Eigen::MatrixXd& input) {
  if (input.rows() != mlp.input_dim()) throw ShapeError("input has the wrong number of rows");
  Eigen::MatrixXd a = input;
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    const DenseLayer& layer = mlp.layer(l);
    Eigen::MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    a = (l + 1 < mlp.layer_count()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : std::move(z);
  }
  return a;
}

Eigen::VectorXd predict(const Mlp& mlp, std::span<const double> input) {
  if (static_cast<int>(input.size()) != mlp.input_dim()) {
    throw ShapeError("input has the wrong length");
  }
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(input.data(), mlp.input_dim());
  for (std::size_t l = 0; l < mlp.layer_count(); ++l) {
    const DenseLayer& layer = mlp.layer(l);
    Eigen::VectorXd z = layer.weight * a + layer.bias;
    a = (l + 1 < mlp.layer_count()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : std::move(z);
  }
  return a;
}

Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad) {
  check_cache(mlp, cache, output_grad);
  Gradients grads;
  grads.params.layers.resize(mlp.layer_count());
  Eigen::MatrixXd delta = output_grad;
  for (std::size_t l = mlp.layer_count(); l-- > 0;) {
    const Eigen::MatrixXd& in = cache.inputs[l];
    grads.params.layers[l].weight = delta * in.transpose();
    grads.params.layers[l].bias = delta.rowwise().sum();
    Eigen::MatrixXd upstream = mlp.layer(l).weight.transpose() * delta;
    if (l > 0) {
      // inputs[l] = relu(z_{l-1}); its derivative is the positivity mask.
      upstream = (in.array() > 0.0).select(upstream, 0.0);
    }
    delta = std::move(upstream);
  }
  grads.input = std::move(delta);
  return grads;
}

Eigen::MatrixXd backward_input(const Mlp& mlp, const ForwardCache& cache,
                               const Eigen::MatrixXd& output_grad) {
  check_cache(mlp, cache, output_grad);
  Eigen::MatrixXd delta = output_grad;
  for (std::size_t l = mlp.layer_count(); l-- > 0;) {
    Eigen::MatrixXd upstream = mlp.layer(l).weight.transpose() * delta;
    if (l > 0) upstream = (cache.inputs[l].array() > 0.0).select(upstream, 0.0);
    delta = std::move(upstream);
  }
  return delta;
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("soft-update factor must lie in [0, 1]");
  if (target.dims() != online.dims()) throw ShapeError("soft_update: network shapes differ");
  const double keep = 1.0 - tau;
  auto& layers = target.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weight = tau * online.layer(l).weight.array() + keep * layers[l].weight.array();
    layers[l].bias = tau * online.layer(l).bias.array() + keep * layers[l].bias.array();
  }
}

}  // namespace emac::nn
