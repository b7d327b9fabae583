#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "intentnet/features.hpp"
#include "intentnet/matrix.hpp"

namespace intentnet {

enum class Activation { ReLU, Sigmoid, Linear };
enum class LossKind { MSE, BinaryCrossEntropy };
enum class OptimizerKind { Adadelta, Adam, RMSProp };

const char* activation_name(Activation a);
Activation activation_from(std::string_view s);
const char* loss_name(LossKind l);
LossKind loss_from(std::string_view s);
const char* optimizer_name(OptimizerKind o);
OptimizerKind optimizer_from(std::string_view s);

// Fully connected layer: out = act(x * W^T + b), weights stored row-major
// as (out_dim x in_dim).
struct DenseLayer {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Matrix weights;
  std::vector<double> bias;
  Activation activation = Activation::Linear;
};

using Net = std::vector<DenseLayer>;

// Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases,
// drawn from the given seed in layer order.
DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim, Activation act,
                      class Rng& rng);

std::size_t net_input_dim(const Net& net);
std::size_t net_output_dim(const Net& net);

// Forward pass keeping every pre- and post-activation for backprop.
struct ForwardTrace {
  std::vector<Matrix> pre;   // one per layer
  std::vector<Matrix> post;  // one per layer; post.back() is the output

  const Matrix& output() const { return post.back(); }
};

ForwardTrace forward(const Net& net, const Matrix& input);

// Loss averaged over batch rows *and* output features, so a value is
// comparable across batch sizes and layer widths. BinaryCrossEntropy clamps
// predictions into [1e-7, 1 - 1e-7] before the logs; outside that band the
// clamp makes the loss locally flat and the gradient is exactly zero.
double compute_loss(LossKind kind, const Matrix& predicted,
                    const Matrix& target);

struct Gradients {
  std::vector<Matrix> weights;            // same shapes as the layers
  std::vector<std::vector<double>> bias;
};

// Exact gradients of compute_loss' mean value with respect to every weight
// and bias. Requires the trace produced by forward() on the same net.
Gradients backward(const Net& net, const Matrix& input,
                   const ForwardTrace& trace, const Matrix& target,
                   LossKind loss);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adadelta;
  double learning_rate = 0.001;  // ignored by Adadelta
  double rho = 0.9;              // RMSProp decay / Adadelta rho
  double beta1 = 0.9;            // Adam
  double beta2 = 0.999;          // Adam
  double epsilon = 1e-8;

  static OptimizerConfig defaults(OptimizerKind kind);
};

// Update rules (g = gradient of the mean batch loss):
//   RMSProp : acc = rho*acc + (1-rho)*g^2 ; p -= lr*g / (sqrt(acc) + eps)
//   Adam    : m = b1*m + (1-b1)*g ; v = b2*v + (1-b2)*g^2
//             p -= lr*(m/(1-b1^t)) / (sqrt(v/(1-b2^t)) + eps)
//   Adadelta: ag = rho*ag + (1-rho)*g^2
//             step = -sqrt(ax + eps)/sqrt(ag + eps) * g
//             ax = rho*ax + (1-rho)*step^2 ; p += step   (no learning rate)
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, const Net& net);

  // Applies one update. Errors: ShapeMismatch when the gradients do not
  // match the net, NonFiniteGradient when any gradient is NaN/inf.
  void step(Net& net, const Gradients& grads);

  const OptimizerConfig& config() const { return config_; }
  std::uint64_t steps_taken() const { return t_; }

 private:
  OptimizerConfig config_;
  std::uint64_t t_ = 0;
  // One slot per parameter tensor (layer0.W, layer0.b, layer1.W, ...).
  std::vector<std::vector<double>> acc1_;
  std::vector<std::vector<double>> acc2_;
};

struct TrainConfig {
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::MSE;
  bool shuffle_each_epoch = true;
};

struct TrainHistory {
  std::vector<double> train_loss;     // one per epoch, batch-size-weighted
  std::vector<double> val_loss;       // one per epoch; empty if no val rows
  std::vector<double> epoch_seconds;  // wall time
};

inline constexpr std::size_t steps_per_epoch(std::size_t n_rows,
                                             std::size_t batch_size) {
  return (n_rows + batch_size - 1) / batch_size;
}

// Mini-batch training. Rows with split == Train are batched (shuffled each
// epoch from the config seed); rows with split == Validation only contribute
// the per-epoch validation loss. Identical seed/config/data give bitwise
// identical parameters. Errors: InvalidConfig (epochs or batch_size zero, no
// training rows), ShapeMismatch between net/input/target.
TrainHistory fit(Net& net, const Matrix& input, const Matrix& target,
                 const std::vector<Split>& split, const TrainConfig& config,
                 Optimizer& optimizer);

// --- model serialization ----------------------------------------------------

// JSON layout:
//   {"layers": [{"in", "out", "activation", "weights" (row-major), "bias"}],
//    "meta": {"seed", "config", ...}}
// `meta` carries whatever config map the caller passes; encoder_layer_count
// (when >0) marks how many leading layers form an encoder.
std::string net_to_json(const Net& net, std::uint64_t seed,
                        const std::string& config_summary,
                        std::size_t encoder_layer_count = 0);
void save_net_json(const Net& net, std::uint64_t seed,
                   const std::string& config_summary,
                   const std::filesystem::path& path,
                   std::size_t encoder_layer_count = 0);

struct LoadedNet {
  Net net;
  std::uint64_t seed = 0;
  std::string config_summary;
  std::size_t encoder_layer_count = 0;
};
LoadedNet load_net_json(const std::filesystem::path& path);

}  // namespace intentnet
