#include "prb/mlp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "prb/errors.hpp"
#include "prb/rng.hpp"

namespace prb {

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 3) {
    throw ConfigError("network needs at least one hidden layer (depth >= 2), "
                      "got " + std::to_string(dims.size()) + " dims");
  }
  if (dims.back() != 1) {
    throw ConfigError("network output dimension must be 1");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw ConfigError("network layer dims must be >= 1");
  }
}

void check_input(const MLPParams& p, std::span<const double> x) {
  if (x.size() != p.input_dim()) {
    throw DimensionError("network input has length " +
                         std::to_string(x.size()) + ", expected " +
                         std::to_string(p.input_dim()));
  }
}

// out[r] = sum_c w[r, c] * in[c]
void matvec(std::span<const double> w, std::size_t rows, std::size_t cols,
            const double* in, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * in[c];
    out[r] = acc;
  }
}

}  // namespace

MLPParams::MLPParams(std::vector<std::size_t> layer_dims)
    : dims_(std::move(layer_dims)) {
  check_dims(dims_);
  offsets_.resize(num_layers() + 1);
  offsets_[0] = 0;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    offsets_[l + 1] = offsets_[l] + dims_[l] * dims_[l + 1];
  }
  theta_.assign(offsets_.back(), 0.0);
}

std::span<double> MLPParams::layer(std::size_t l) {
  return std::span<double>(theta_).subspan(offsets_[l], rows(l) * cols(l));
}

std::span<const double> MLPParams::layer(std::size_t l) const {
  return std::span<const double>(theta_).subspan(offsets_[l],
                                                 rows(l) * cols(l));
}

MLPParams init_mlp(std::vector<std::size_t> layer_dims, std::uint64_t seed) {
  MLPParams p(std::move(layer_dims));
  Rng rng(seed);
  const auto width = static_cast<double>(p.layer_dims()[p.num_layers() - 1]);
  std::normal_distribution<double> hidden(0.0, std::sqrt(2.0 / width));
  std::normal_distribution<double> output(0.0, std::sqrt(1.0 / width));
  const std::size_t last = p.num_layers() - 1;
  for (std::size_t l = 0; l < p.num_layers(); ++l) {
    auto w = p.layer(l);
    auto& dist = (l == last) ? output : hidden;
    for (double& x : w) x = dist(rng);
  }
  return p;
}

MlpWorkspace::MlpWorkspace(const MLPParams& p) {
  activations_.resize(p.num_layers());
  std::size_t widest = 0;
  for (std::size_t l = 1; l < p.num_layers(); ++l) {
    activations_[l].resize(p.layer_dims()[l]);
    widest = std::max(widest, p.layer_dims()[l]);
  }
  delta_.resize(widest);
  delta_prev_.resize(widest);
}

double MlpWorkspace::forward(const MLPParams& p, std::span<const double> x) {
  check_input(p, x);
  const std::size_t L = p.num_layers();
  const double* in = x.data();
  for (std::size_t l = 0; l + 1 < L; ++l) {
    double* out = activations_[l + 1].data();
    matvec(p.layer(l), p.rows(l), p.cols(l), in, out);
    for (std::size_t r = 0; r < p.rows(l); ++r) out[r] = std::max(out[r], 0.0);
    in = out;
  }
  double f = 0.0;
  matvec(p.layer(L - 1), 1, p.cols(L - 1), in, &f);
  return f;
}

double MlpWorkspace::accumulate_gradient(const MLPParams& p,
                                         std::span<const double> x,
                                         double scale,
                                         std::span<double> grad) {
  const double f = forward(p, x);
  backward(p, x, scale, grad);
  return f;
}

void MlpWorkspace::backward(const MLPParams& p, std::span<const double> x,
                            double scale, std::span<double> grad) {
  const std::size_t L = p.num_layers();

  auto input_of = [&](std::size_t l) -> const double* {
    return l == 0 ? x.data() : activations_[l].data();
  };

  // Output layer: df/dW_L = a_{L-1}.
  {
    const std::size_t cols = p.cols(L - 1);
    double* g = grad.data() + p.offset(L - 1);
    const double* a = input_of(L - 1);
    for (std::size_t c = 0; c < cols; ++c) g[c] += scale * a[c];
    const auto w = p.layer(L - 1);
    for (std::size_t c = 0; c < cols; ++c) {
      delta_[c] = a[c] > 0.0 ? scale * w[c] : 0.0;
    }
  }

  // delta_ holds d(scale * f)/dz for the outputs of layer l.
  for (std::size_t l = L - 1; l-- > 0;) {
    const std::size_t rows = p.rows(l);
    const std::size_t cols = p.cols(l);
    const double* a = input_of(l);
    double* g = grad.data() + p.offset(l);
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = delta_[r];
      if (d == 0.0) continue;
      double* grow = g + r * cols;
      for (std::size_t c = 0; c < cols; ++c) grow[c] += d * a[c];
    }
    if (l == 0) break;
    const auto w = p.layer(l);
    std::fill_n(delta_prev_.begin(), cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = delta_[r];
      if (d == 0.0) continue;
      const double* wrow = w.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) delta_prev_[c] += d * wrow[c];
    }
    for (std::size_t c = 0; c < cols; ++c) {
      delta_[c] = a[c] > 0.0 ? delta_prev_[c] : 0.0;
    }
  }
}

double forward(const MLPParams& p, std::span<const double> x) {
  MlpWorkspace ws(p);
  return ws.forward(p, x);
}

std::vector<double> gradient(const MLPParams& p, std::span<const double> x) {
  check_input(p, x);
  MlpWorkspace ws(p);
  std::vector<double> grad(p.num_params(), 0.0);
  ws.accumulate_gradient(p, x, 1.0, grad);
  return grad;
}

OptimizerState OptimizerState::gradient_descent(double learning_rate) {
  OptimizerState s;
  s.kind = OptimizerKind::gradient_descent;
  s.learning_rate = learning_rate;
  return s;
}

OptimizerState OptimizerState::adam(double learning_rate,
                                    std::size_t num_params) {
  OptimizerState s;
  s.kind = OptimizerKind::adam;
  s.learning_rate = learning_rate;
  s.first_moment.assign(num_params, 0.0);
  s.second_moment.assign(num_params, 0.0);
  return s;
}

void OptimizerState::apply(std::span<double> theta,
                           std::span<const double> grad) {
  ++step_count;
  const std::size_t n = theta.size();
  if (kind == OptimizerKind::gradient_descent) {
    for (std::size_t i = 0; i < n; ++i) theta[i] -= learning_rate * grad[i];
    return;
  }
  if (first_moment.size() != n || second_moment.size() != n) {
    throw DimensionError("adam state does not match parameter count");
  }
  const auto t = static_cast<double>(step_count);
  const double c1 = 1.0 - std::pow(beta1, t);
  const double c2 = 1.0 - std::pow(beta2, t);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    first_moment[i] = beta1 * first_moment[i] + (1.0 - beta1) * g;
    second_moment[i] = beta2 * second_moment[i] + (1.0 - beta2) * g * g;
    const double m_hat = first_moment[i] / c1;
    const double v_hat = second_moment[i] / c2;
    theta[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + stability);
  }
}

void TrainBuffer::add(std::span<const double> input, double target) {
  if (targets_.empty() && dim_ == 0) dim_ = input.size();
  if (input.size() != dim_) {
    throw DimensionError("train buffer expects inputs of length " +
                         std::to_string(dim_) + ", got " +
                         std::to_string(input.size()));
  }
  inputs_.insert(inputs_.end(), input.begin(), input.end());
  targets_.push_back(target);
}

void TrainBuffer::clear() {
  inputs_.clear();
  targets_.clear();
}

TrainStatus train(MLPParams& p, OptimizerState& opt, const TrainBuffer& buf,
                  const TrainOptions& options, std::uint64_t seed) {
  if (buf.empty()) return TrainStatus::no_data;
  if (options.epochs < 1 || options.batch_size < 1) {
    throw ConfigError("training needs epochs >= 1 and batch_size >= 1");
  }
  if (buf.dim() != p.input_dim()) {
    throw DimensionError("train buffer dim " + std::to_string(buf.dim()) +
                         " != network input " + std::to_string(p.input_dim()));
  }
  Rng rng(seed);
  MlpWorkspace ws(p);
  std::vector<std::size_t> order(buf.size());
  std::vector<double> grad(p.num_params());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      const double inv = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        // d/dtheta (f - y)^2 / 2 = (f - y) df/dtheta
        const double f = ws.forward(p, buf.input(i));
        const double residual = f - buf.target(i);
        if (residual == 0.0) continue;
        ws.backward(p, buf.input(i), residual * inv, grad);
      }
      opt.apply(p.flat(), grad);
    }
  }
  return TrainStatus::trained;
}

double mean_squared_error(const MLPParams& p, const TrainBuffer& buf) {
  if (buf.empty()) return 0.0;
  MlpWorkspace ws(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double r = ws.forward(p, buf.input(i)) - buf.target(i);
    acc += r * r;
  }
  return acc / static_cast<double>(buf.size());
}

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <class T>
void write_le(std::ostream& os, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bits.begin(), bits.end());
  }
  os.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bits{};
  is.read(reinterpret_cast<char*>(bits.data()), sizeof(T));
  if (!is) throw ParseError("checkpoint truncated", 0);
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bits.begin(), bits.end());
  }
  return std::bit_cast<T>(bits);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const MLPParams& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open checkpoint for writing: " + path.string());
  write_le<std::uint64_t>(os, p.num_layers());
  for (std::size_t d : p.layer_dims()) write_le<std::uint64_t>(os, d);
  for (double w : p.flat()) write_le<double>(os, w);
  if (!os) throw Error("failed writing checkpoint: " + path.string());
}

MLPParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint: " + path.string());
  const auto layers = read_le<std::uint64_t>(is);
  if (layers < 2 || layers > 64) {
    throw ParseError("checkpoint has implausible layer count " +
                         std::to_string(layers), 0);
  }
  std::vector<std::size_t> dims(layers + 1);
  for (auto& d : dims) d = read_le<std::uint64_t>(is);
  MLPParams p(dims);
  for (double& w : p.flat()) w = read_le<double>(is);
  return p;
}

}  // namespace prb
