#include "intentnet/autoencoder.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "intentnet/errors.hpp"
#include "intentnet/rng.hpp"

namespace intentnet {

std::string AEConfig::summary() const {
  std::ostringstream out;
  out << "ae hidden=[";
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    out << (i ? " " : "") << hidden[i];
  }
  out << "] embedding=" << embedding_dim
      << " optimizer=" << optimizer_name(optimizer.kind)
      << " epochs=" << epochs << " batch=" << batch_size;
  return out.str();
}

Net build_sae(std::size_t input_dim, const AEConfig& config,
              std::uint64_t seed) {
  if (input_dim == 0 || config.embedding_dim == 0) {
    throw Error(Errc::InvalidConfig, "autoencoder dimensions must be positive");
  }
  // Widths must taper (or stay level) down to the bottleneck.
  std::size_t prev = input_dim;
  for (const std::size_t h : config.hidden) {
    if (h == 0) {
      throw Error(Errc::InvalidConfig, "hidden width must be positive");
    }
    if (h > prev) {
      throw Error(Errc::ConstraintViolation,
                  "hidden widths must be non-increasing toward the bottleneck");
    }
    prev = h;
  }
  if (config.embedding_dim > prev) {
    throw Error(Errc::ConstraintViolation,
                "embedding_dim exceeds the narrowest encoder layer");
  }

  Rng rng(seed);
  Net net;
  prev = input_dim;
  for (const std::size_t h : config.hidden) {
    net.push_back(make_dense(prev, h, Activation::ReLU, rng));
    prev = h;
  }
  net.push_back(make_dense(prev, config.embedding_dim, Activation::Linear, rng));
  prev = config.embedding_dim;
  for (auto it = config.hidden.rbegin(); it != config.hidden.rend(); ++it) {
    net.push_back(make_dense(prev, *it, Activation::ReLU, rng));
    prev = *it;
  }
  net.push_back(make_dense(prev, input_dim, Activation::Sigmoid, rng));
  return net;
}

TrainHistory train_ae(Net& sae, const FeatureMatrix& features,
                      const AEConfig& config, std::uint64_t seed) {
  if (features.values.cols != net_input_dim(sae)) {
    throw Error(Errc::ShapeMismatch, "feature width vs autoencoder input");
  }
  TrainConfig tc;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.seed = seed;
  tc.loss = LossKind::MSE;
  Optimizer optimizer(config.optimizer, sae);
  return fit(sae, features.values, features.values, features.split, tc,
             optimizer);
}

EmbeddingMatrix encode(const Net& sae, std::size_t encoder_layer_count,
                       const FeatureMatrix& features,
                       const std::string& source_config) {
  if (encoder_layer_count == 0 || encoder_layer_count >= sae.size()) {
    throw Error(Errc::InvalidConfig,
                "encoder_layer_count must split the net in two");
  }
  const Net encoder(sae.begin(),
                    sae.begin() + static_cast<std::ptrdiff_t>(encoder_layer_count));
  const ForwardTrace trace = forward(encoder, features.values);
  EmbeddingMatrix out;
  out.app_ids = features.app_ids;
  out.values = trace.output();
  out.source_config = source_config;
  return out;
}

void write_embeddings_csv(const EmbeddingMatrix& embeddings,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << "app_id";
  for (std::size_t c = 0; c < embeddings.values.cols; ++c) {
    out << ",e" << c;
  }
  out << '\n';
  char buf[40];
  for (std::size_t r = 0; r < embeddings.values.rows; ++r) {
    out << embeddings.app_ids[r];
    for (std::size_t c = 0; c < embeddings.values.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", embeddings.values.at(r, c));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

}  // namespace intentnet

