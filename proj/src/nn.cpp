#include "intentnet/nn.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "intentnet/errors.hpp"
#include "intentnet/kernels.hpp"
#include "intentnet/rng.hpp"

namespace intentnet {

namespace {
constexpr double kBceClamp = 1e-7;
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::ReLU:
      return "relu";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Linear:
      return "linear";
  }
  return "?";
}

Activation activation_from(std::string_view s) {
  if (s == "relu") {
    return Activation::ReLU;
  }
  if (s == "sigmoid") {
    return Activation::Sigmoid;
  }
  if (s == "linear") {
    return Activation::Linear;
  }
  throw Error(Errc::InvalidConfig, "unknown activation: " + std::string(s));
}

const char* loss_name(LossKind l) {
  return l == LossKind::MSE ? "mse" : "bce";
}

LossKind loss_from(std::string_view s) {
  if (s == "mse") {
    return LossKind::MSE;
  }
  if (s == "bce") {
    return LossKind::BinaryCrossEntropy;
  }
  throw Error(Errc::InvalidConfig, "unknown loss: " + std::string(s));
}

const char* optimizer_name(OptimizerKind o) {
  switch (o) {
    case OptimizerKind::Adadelta:
      return "adadelta";
    case OptimizerKind::Adam:
      return "adam";
    case OptimizerKind::RMSProp:
      return "rmsprop";
  }
  return "?";
}

OptimizerKind optimizer_from(std::string_view s) {
  if (s == "adadelta") {
    return OptimizerKind::Adadelta;
  }
  if (s == "adam") {
    return OptimizerKind::Adam;
  }
  if (s == "rmsprop") {
    return OptimizerKind::RMSProp;
  }
  throw Error(Errc::InvalidConfig, "unknown optimizer: " + std::string(s));
}

DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim, Activation act,
                      Rng& rng) {
  if (in_dim == 0 || out_dim == 0) {
    throw Error(Errc::InvalidConfig, "layer dimensions must be positive");
  }
  DenseLayer layer;
  layer.in_dim = in_dim;
  layer.out_dim = out_dim;
  layer.activation = act;
  layer.weights = Matrix(out_dim, in_dim);
  layer.bias.assign(out_dim, 0.0);
  const double limit =
      std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
  for (double& w : layer.weights.data) {
    w = rng.uniform(-limit, limit);
  }
  return layer;
}

std::size_t net_input_dim(const Net& net) {
  if (net.empty()) {
    throw Error(Errc::InvalidConfig, "empty net");
  }
  return net.front().in_dim;
}

std::size_t net_output_dim(const Net& net) {
  if (net.empty()) {
    throw Error(Errc::InvalidConfig, "empty net");
  }
  return net.back().out_dim;
}

namespace {

void apply_activation(Activation act, const Matrix& pre, Matrix& post) {
  const std::size_t n = pre.data.size();
  switch (act) {
    case Activation::ReLU:
      kernels::ops().relu(n, pre.data.data(), post.data.data());
      break;
    case Activation::Sigmoid:
      // exp() comes from libm either way; not worth a SIMD variant.
      for (std::size_t i = 0; i < n; ++i) {
        const double x = pre.data[i];
        if (x >= 0.0) {
          post.data[i] = 1.0 / (1.0 + std::exp(-x));
        } else {
          const double e = std::exp(x);
          post.data[i] = e / (1.0 + e);
        }
      }
      break;
    case Activation::Linear:
      post.data = pre.data;
      break;
  }
}

}  // namespace

ForwardTrace forward(const Net& net, const Matrix& input) {
  if (net.empty()) {
    throw Error(Errc::InvalidConfig, "empty net");
  }
  if (input.cols != net.front().in_dim) {
    throw Error(Errc::ShapeMismatch, "input width vs first layer in_dim");
  }
  ForwardTrace trace;
  trace.pre.reserve(net.size());
  trace.post.reserve(net.size());
  const Matrix* x = &input;
  for (const DenseLayer& layer : net) {
    Matrix z(x->rows, layer.out_dim);
    kernels::ops().gemm_nt(x->rows, layer.out_dim, layer.in_dim,
                           x->data.data(), layer.weights.data.data(),
                           z.data.data());
    kernels::ops().add_bias_rows(z.rows, z.cols, z.data.data(),
                                 layer.bias.data());
    Matrix a(z.rows, z.cols);
    apply_activation(layer.activation, z, a);
    trace.pre.push_back(std::move(z));
    trace.post.push_back(std::move(a));
    x = &trace.post.back();
  }
  return trace;
}

double compute_loss(LossKind kind, const Matrix& predicted,
                    const Matrix& target) {
  if (!predicted.same_shape(target)) {
    throw Error(Errc::ShapeMismatch, "prediction vs target");
  }
  const std::size_t n = predicted.data.size();
  if (n == 0) {
    throw Error(Errc::ShapeMismatch, "empty prediction");
  }
  const double denom = static_cast<double>(n);
  if (kind == LossKind::MSE) {
    return kernels::ops().sq_diff_sum(n, predicted.data.data(),
                                      target.data.data()) /
           denom;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = predicted.data[i];
    if (y < kBceClamp) {
      y = kBceClamp;
    } else if (y > 1.0 - kBceClamp) {
      y = 1.0 - kBceClamp;
    }
    const double t = target.data[i];
    sum -= t * std::log(y) + (1.0 - t) * std::log(1.0 - y);
  }
  return sum / denom;
}

namespace {

// dL/d(prediction) for the mean loss; the flat regions introduced by the
// BCE clamp get an exact zero so analytic and numeric gradients agree.
Matrix loss_gradient(LossKind kind, const Matrix& predicted,
                     const Matrix& target) {
  Matrix grad(predicted.rows, predicted.cols);
  const std::size_t n = predicted.data.size();
  const double denom = static_cast<double>(n);
  if (kind == LossKind::MSE) {
    for (std::size_t i = 0; i < n; ++i) {
      grad.data[i] = 2.0 * (predicted.data[i] - target.data[i]) / denom;
    }
    return grad;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double y = predicted.data[i];
    if (y < kBceClamp || y > 1.0 - kBceClamp) {
      grad.data[i] = 0.0;
    } else {
      grad.data[i] = (y - target.data[i]) / (y * (1.0 - y)) / denom;
    }
  }
  return grad;
}

}  // namespace

Gradients backward(const Net& net, const Matrix& input,
                   const ForwardTrace& trace, const Matrix& target,
                   LossKind loss) {
  if (trace.pre.size() != net.size() || trace.post.size() != net.size()) {
    throw Error(Errc::ShapeMismatch, "trace does not match net");
  }
  Gradients grads;
  grads.weights.resize(net.size());
  grads.bias.resize(net.size());

  Matrix d_post = loss_gradient(loss, trace.output(), target);
  for (std::size_t li = net.size(); li-- > 0;) {
    const DenseLayer& layer = net[li];
    const Matrix& z = trace.pre[li];
    const Matrix& a = trace.post[li];
    Matrix d_pre(d_post.rows, d_post.cols);
    switch (layer.activation) {
      case Activation::ReLU:
        kernels::ops().relu_grad(z.data.size(), z.data.data(),
                                 d_post.data.data(), d_pre.data.data());
        break;
      case Activation::Sigmoid:
        kernels::ops().sigmoid_grad(a.data.size(), a.data.data(),
                                    d_post.data.data(), d_pre.data.data());
        break;
      case Activation::Linear:
        d_pre.data = d_post.data;
        break;
    }

    const Matrix& x = li == 0 ? input : trace.post[li - 1];
    Matrix dw(layer.out_dim, layer.in_dim);
    // dW = d_pre^T * x; both stored batch-major, so this is the T-N product.
    kernels::ops().gemm_tn(layer.out_dim, layer.in_dim, d_pre.rows,
                           d_pre.data.data(), x.data.data(), dw.data.data());
    std::vector<double> db(layer.out_dim);
    kernels::ops().col_sum(d_pre.rows, d_pre.cols, d_pre.data.data(),
                           db.data());
    grads.weights[li] = std::move(dw);
    grads.bias[li] = std::move(db);

    if (li > 0) {
      Matrix d_prev(d_pre.rows, layer.in_dim);
      kernels::ops().gemm_nn(d_pre.rows, layer.in_dim, layer.out_dim,
                             d_pre.data.data(), layer.weights.data.data(),
                             d_prev.data.data());
      d_post = std::move(d_prev);
    }
  }
  return grads;
}

OptimizerConfig OptimizerConfig::defaults(OptimizerKind kind) {
  OptimizerConfig c;
  c.kind = kind;
  switch (kind) {
    case OptimizerKind::RMSProp:
      c.learning_rate = 0.001;
      c.rho = 0.9;
      c.epsilon = 1e-8;
      break;
    case OptimizerKind::Adam:
      c.learning_rate = 0.001;
      c.beta1 = 0.9;
      c.beta2 = 0.999;
      c.epsilon = 1e-8;
      break;
    case OptimizerKind::Adadelta:
      c.rho = 0.95;
      c.epsilon = 1e-6;
      break;
  }
  return c;
}

Optimizer::Optimizer(OptimizerConfig config, const Net& net)
    : config_(config) {
  for (const DenseLayer& layer : net) {
    acc1_.emplace_back(layer.weights.data.size(), 0.0);
    acc1_.emplace_back(layer.bias.size(), 0.0);
    if (config_.kind != OptimizerKind::RMSProp) {
      acc2_.emplace_back(layer.weights.data.size(), 0.0);
      acc2_.emplace_back(layer.bias.size(), 0.0);
    }
  }
}

void Optimizer::step(Net& net, const Gradients& grads) {
  if (grads.weights.size() != net.size() || grads.bias.size() != net.size()) {
    throw Error(Errc::ShapeMismatch, "gradients do not match net");
  }
  for (std::size_t li = 0; li < net.size(); ++li) {
    if (!grads.weights[li].same_shape(net[li].weights) ||
        grads.bias[li].size() != net[li].bias.size()) {
      throw Error(Errc::ShapeMismatch, "gradient tensor shape");
    }
    for (const double g : grads.weights[li].data) {
      if (!std::isfinite(g)) {
        throw Error(Errc::NonFiniteGradient, "weight gradient");
      }
    }
    for (const double g : grads.bias[li]) {
      if (!std::isfinite(g)) {
        throw Error(Errc::NonFiniteGradient, "bias gradient");
      }
    }
  }

  ++t_;
  const auto& ops = kernels::ops();
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));

  std::size_t slot = 0;
  for (std::size_t li = 0; li < net.size(); ++li) {
    const double* gw = grads.weights[li].data.data();
    const double* gb = grads.bias[li].data();
    double* pw = net[li].weights.data.data();
    double* pb = net[li].bias.data();
    const std::size_t nw = net[li].weights.data.size();
    const std::size_t nb = net[li].bias.size();
    switch (config_.kind) {
      case OptimizerKind::RMSProp:
        ops.rmsprop_update(nw, pw, gw, acc1_[slot].data(),
                           config_.learning_rate, config_.rho,
                           config_.epsilon);
        ops.rmsprop_update(nb, pb, gb, acc1_[slot + 1].data(),
                           config_.learning_rate, config_.rho,
                           config_.epsilon);
        break;
      case OptimizerKind::Adam:
        ops.adam_update(nw, pw, gw, acc1_[slot].data(), acc2_[slot].data(),
                        config_.learning_rate, config_.beta1, config_.beta2,
                        config_.epsilon, bc1, bc2);
        ops.adam_update(nb, pb, gb, acc1_[slot + 1].data(),
                        acc2_[slot + 1].data(), config_.learning_rate,
                        config_.beta1, config_.beta2, config_.epsilon, bc1,
                        bc2);
        break;
      case OptimizerKind::Adadelta:
        ops.adadelta_update(nw, pw, gw, acc1_[slot].data(),
                            acc2_[slot].data(), config_.rho, config_.epsilon);
        ops.adadelta_update(nb, pb, gb, acc1_[slot + 1].data(),
                            acc2_[slot + 1].data(), config_.rho,
                            config_.epsilon);
        break;
    }
    slot += 2;
  }
}

namespace {

Matrix gather_rows(const Matrix& src, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), src.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* from = src.row(rows[i]);
    std::copy(from, from + src.cols, out.row(i));
  }
  return out;
}

}  // namespace

TrainHistory fit(Net& net, const Matrix& input, const Matrix& target,
                 const std::vector<Split>& split, const TrainConfig& config,
                 Optimizer& optimizer) {
  if (config.epochs == 0) {
    throw Error(Errc::InvalidConfig, "epochs must be >= 1");
  }
  if (config.batch_size == 0) {
    throw Error(Errc::InvalidConfig, "batch_size must be >= 1");
  }
  if (input.rows != target.rows || input.rows != split.size()) {
    throw Error(Errc::ShapeMismatch, "input/target/split row counts");
  }
  if (target.cols != net_output_dim(net)) {
    throw Error(Errc::ShapeMismatch, "target width vs net output dim");
  }

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  for (std::size_t r = 0; r < split.size(); ++r) {
    (split[r] == Split::Train ? train_rows : val_rows).push_back(r);
  }
  if (train_rows.empty()) {
    throw Error(Errc::InvalidConfig, "no training rows");
  }

  const Matrix val_x = gather_rows(input, val_rows);
  const Matrix val_y = gather_rows(target, val_rows);

  Rng rng(config.seed);
  TrainHistory history;
  std::vector<std::size_t> order = train_rows;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    if (config.shuffle_each_epoch) {
      rng.shuffle(order);
    }
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t n =
          std::min(config.batch_size, order.size() - start);
      const std::vector<std::size_t> batch(order.begin() + start,
                                           order.begin() + start + n);
      const Matrix bx = gather_rows(input, batch);
      const Matrix by = gather_rows(target, batch);
      const ForwardTrace trace = forward(net, bx);
      loss_sum +=
          compute_loss(config.loss, trace.output(), by) * static_cast<double>(n);
      const Gradients grads = backward(net, bx, trace, by, config.loss);
      optimizer.step(net, grads);
    }
    history.train_loss.push_back(loss_sum /
                                 static_cast<double>(order.size()));
    if (!val_rows.empty()) {
      const ForwardTrace vt = forward(net, val_x);
      history.val_loss.push_back(
          compute_loss(config.loss, vt.output(), val_y));
    }
    history.epoch_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count());
  }
  return history;
}

// --- model serialization ----------------------------------------------------

std::string net_to_json(const Net& net, std::uint64_t seed,
                        const std::string& config_summary,
                        std::size_t encoder_layer_count) {
  nlohmann::ordered_json doc;
  doc["layers"] = nlohmann::ordered_json::array();
  for (const DenseLayer& layer : net) {
    nlohmann::ordered_json l;
    l["in"] = layer.in_dim;
    l["out"] = layer.out_dim;
    l["activation"] = activation_name(layer.activation);
    l["weights"] = layer.weights.data;
    l["bias"] = layer.bias;
    doc["layers"].push_back(std::move(l));
  }
  doc["meta"]["seed"] = seed;
  doc["meta"]["config"] = config_summary;
  if (encoder_layer_count > 0) {
    doc["meta"]["encoder_layer_count"] = encoder_layer_count;
  }
  return doc.dump(2) + "\n";
}

void save_net_json(const Net& net, std::uint64_t seed,
                   const std::string& config_summary,
                   const std::filesystem::path& path,
                   std::size_t encoder_layer_count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << net_to_json(net, seed, config_summary, encoder_layer_count);
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

LoadedNet load_net_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoFailure, "cannot read " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::IoFailure, path.string() + ": " + e.what());
  }

  LoadedNet loaded;
  for (const auto& l : doc.at("layers")) {
    DenseLayer layer;
    layer.in_dim = l.at("in").get<std::size_t>();
    layer.out_dim = l.at("out").get<std::size_t>();
    layer.activation = activation_from(l.at("activation").get<std::string>());
    layer.weights = Matrix(layer.out_dim, layer.in_dim);
    const auto& w = l.at("weights");
    if (w.size() != layer.weights.data.size()) {
      throw Error(Errc::ShapeMismatch, "weight count in " + path.string());
    }
    for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
      layer.weights.data[i] = w[i].get<double>();
    }
    const auto& b = l.at("bias");
    if (b.size() != layer.out_dim) {
      throw Error(Errc::ShapeMismatch, "bias count in " + path.string());
    }
    layer.bias.resize(layer.out_dim);
    for (std::size_t i = 0; i < layer.out_dim; ++i) {
      layer.bias[i] = b[i].get<double>();
    }
    if (!loaded.net.empty() && loaded.net.back().out_dim != layer.in_dim) {
      throw Error(Errc::ShapeMismatch,
                  "layer dimension chain in " + path.string());
    }
    loaded.net.push_back(std::move(layer));
  }
  if (loaded.net.empty()) {
    throw Error(Errc::IoFailure, "no layers in " + path.string());
  }
  if (doc.contains("meta")) {
    const auto& meta = doc["meta"];
    loaded.seed = meta.value("seed", std::uint64_t{0});
    loaded.config_summary = meta.value("config", std::string());
    loaded.encoder_layer_count =
        meta.value("encoder_layer_count", std::size_t{0});
  }
  return loaded;
}

}  // namespace intentnet
