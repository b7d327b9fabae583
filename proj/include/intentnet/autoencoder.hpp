#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intentnet/features.hpp"
#include "intentnet/nn.hpp"

namespace intentnet {

// Stacked autoencoder shape and training knobs. The encoder is
// input -> hidden... -> embedding (ReLU hidden, Linear embedding); the
// decoder mirrors the hidden stack back up and finishes with a Sigmoid layer
// of input width. Trained end to end, not layerwise.
struct AEConfig {
  std::vector<std::size_t> hidden;  // may be empty (single bottleneck)
  std::size_t embedding_dim = 32;
  std::size_t epochs = 1000;
  std::size_t batch_size = 1024;
  OptimizerConfig optimizer = OptimizerConfig::defaults(OptimizerKind::Adadelta);

  std::size_t encoder_layer_count() const { return hidden.size() + 1; }
  std::string summary() const;
};

// Embeddings for every row of a feature matrix, in row order.
struct EmbeddingMatrix {
  std::vector<std::string> app_ids;
  Matrix values;
  std::string source_config;  // AEConfig summary that produced them
};

// Builds the symmetric net with Glorot-uniform init from `seed`. Errors:
// ConstraintViolation unless input_dim >= h1 >= h2 >= ... >= embedding_dim
// (equal widths allowed), InvalidConfig for zero dims.
Net build_sae(std::size_t input_dim, const AEConfig& config,
              std::uint64_t seed);

// Reconstruction training (MSE, targets = inputs) on the Train rows;
// Validation rows drive history.val_loss. Per-feature mean MSE, so losses
// are comparable across layer widths.
TrainHistory train_ae(Net& sae, const FeatureMatrix& features,
                      const AEConfig& config, std::uint64_t seed);

// Runs the encoder half (first encoder_layer_count layers) over every row.
EmbeddingMatrix encode(const Net& sae, std::size_t encoder_layer_count,
                       const FeatureMatrix& features,
                       const std::string& source_config = "");

// CSV: app_id,e0,...,e{d-1} (full precision; embeddings are data, not a
// report).
void write_embeddings_csv(const EmbeddingMatrix& embeddings,
                          const std::filesystem::path& path);

}  // namespace intentnet
