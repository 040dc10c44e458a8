#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace prb {

/// Weights of a bias-free fully-connected ReLU network
///   f(x) = W_L relu(W_{L-1} ... relu(W_1 x)).
///
/// layer_dims = [d, m_1, ..., m_{L-1}, 1]; layer l (0-based) is a
/// layer_dims[l+1] x layer_dims[l] matrix. All weights live in one flat
/// vector, layer-major, each layer row-major. gradient() uses the same order.
class MLPParams {
 public:
  MLPParams() = default;
  /// Zero-initialised network. Throws ConfigError on invalid dims.
  explicit MLPParams(std::vector<std::size_t> layer_dims);

  const std::vector<std::size_t>& layer_dims() const noexcept { return dims_; }
  std::size_t num_layers() const noexcept { return dims_.size() - 1; }
  std::size_t input_dim() const noexcept { return dims_.front(); }
  std::size_t num_params() const noexcept { return theta_.size(); }

  std::size_t rows(std::size_t layer) const { return dims_[layer + 1]; }
  std::size_t cols(std::size_t layer) const { return dims_[layer]; }
  std::size_t offset(std::size_t layer) const { return offsets_[layer]; }

  std::span<double> layer(std::size_t l);
  std::span<const double> layer(std::size_t l) const;

  std::span<double> flat() noexcept { return theta_; }
  std::span<const double> flat() const noexcept { return theta_; }

  bool operator==(const MLPParams&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> theta_;
};

/// Hidden-layer entries ~ N(0, 2/m), output-layer entries ~ N(0, 1/m) where m
/// is the width of the last hidden layer.
MLPParams init_mlp(std::vector<std::size_t> layer_dims, std::uint64_t seed);

double forward(const MLPParams& p, std::span<const double> x);

/// d forward(p, x) / d theta, flat in the parameter layout above.
std::vector<double> gradient(const MLPParams& p, std::span<const double> x);

/// Reusable scratch space for forward/backward passes.
class MlpWorkspace {
 public:
  explicit MlpWorkspace(const MLPParams& p);

  double forward(const MLPParams& p, std::span<const double> x);
  /// Runs forward, then adds scale * d f / d theta into grad. Returns f(x).
  double accumulate_gradient(const MLPParams& p, std::span<const double> x,
                             double scale, std::span<double> grad);
  /// Backward pass only; reuses the activations of the preceding forward()
  /// call, which must have been made with the same p and x.
  void backward(const MLPParams& p, std::span<const double> x, double scale,
                std::span<double> grad);

 private:
  // activations_[l] is the input to weight layer l (activations_[0] unused,
  // the caller's x is read directly).
  std::vector<std::vector<double>> activations_;
  std::vector<double> delta_;
  std::vector<double> delta_prev_;
};

enum class OptimizerKind { gradient_descent, adam };

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::gradient_descent;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double stability = 1e-8;
  std::uint64_t step_count = 0;
  std::vector<double> first_moment;   // adam only
  std::vector<double> second_moment;  // adam only

  static OptimizerState gradient_descent(double learning_rate);
  static OptimizerState adam(double learning_rate, std::size_t num_params);

  /// One update theta <- theta - step(grad).
  void apply(std::span<double> theta, std::span<const double> grad);

  bool operator==(const OptimizerState&) const = default;
};

/// (input, target) pairs stored contiguously.
class TrainBuffer {
 public:
  TrainBuffer() = default;
  explicit TrainBuffer(std::size_t dim) : dim_(dim) {}

  void add(std::span<const double> input, double target);
  void clear();

  std::size_t size() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return targets_.empty(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> input(std::size_t i) const {
    return {inputs_.data() + i * dim_, dim_};
  }
  double target(std::size_t i) const { return targets_[i]; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> inputs_;
  std::vector<double> targets_;
};

struct TrainOptions {
  std::size_t epochs = 2;
  std::size_t batch_size = 32;
};

enum class TrainStatus { trained, no_data };

/// Mini-batch descent on the mean of (f(x) - target)^2 / 2. Each epoch visits
/// the buffer in a fresh permutation drawn from `seed`. An empty buffer leaves
/// everything untouched and reports no_data.
TrainStatus train(MLPParams& p, OptimizerState& opt, const TrainBuffer& buf,
                  const TrainOptions& options, std::uint64_t seed);

double mean_squared_error(const MLPParams& p, const TrainBuffer& buf);

/// Checkpoint layout, all little-endian:
///   u64 L                number of weight layers
///   u64 dims[L + 1]      layer_dims
///   f64 weights[...]     layer-major, each layer row-major
void save_checkpoint(const std::filesystem::path& path, const MLPParams& p);
MLPParams load_checkpoint(const std::filesystem::path& path);

}  // namespace prb
