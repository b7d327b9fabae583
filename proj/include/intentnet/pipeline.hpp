#pragma once

#include <cstdint>

#include "intentnet/autoencoder.hpp"
#include "intentnet/classifier.hpp"
#include "intentnet/metrics.hpp"

namespace intentnet {

// One full training run: fit the autoencoder on the Train rows, embed every
// row, fit the classifier head, score everything and evaluate ROC/threshold
// policies on the Validation rows. All randomness (inits, shuffles) derives
// from `seed`, so equal inputs give bitwise-equal outputs.
struct PipelineConfig {
  AEConfig ae;
  MLPConfig mlp;
  std::uint64_t seed = 0;
};

struct PipelineResult {
  Net ae_net;
  TrainHistory ae_history;
  double ae_val_loss = 0.0;  // final-epoch reconstruction loss

  EmbeddingMatrix embeddings;

  Net mlp_net;
  TrainHistory mlp_history;

  ScoreVector scores;  // every row, feature order
  RocCurve roc;        // Validation rows only
  ThresholdReport fixed05;
  ThresholdReport best_accuracy;
  ThresholdReport best_f1;
};

PipelineResult run_pipeline(const FeatureMatrix& features,
                            const PipelineConfig& config);

// Built-in training defaults, matching the bundled config file: autoencoder
// [128, 64] -> 32 and classifier [64, 64, 64, 64], both rmsprop, 1000
// epochs, batch 1024.
PipelineConfig default_pipeline_config();

// Reads {"ae": {hidden, embedding, epochs, batch, optimizer, ...},
//        "mlp": {hidden, epochs, batch, optimizer, ...}};
// missing sections fall back to the defaults above.
PipelineConfig read_train_config_json(const std::filesystem::path& path);

}  // namespace intentnet
