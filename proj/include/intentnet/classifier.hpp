#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "intentnet/autoencoder.hpp"
#include "intentnet/features.hpp"
#include "intentnet/nn.hpp"

namespace intentnet {

// Binary malware classifier head: embedding -> hidden (ReLU)... -> 1
// (Sigmoid), trained with binary cross-entropy. Malicious is the positive
// class (target 1.0).
struct MLPConfig {
  std::vector<std::size_t> hidden;  // must be non-empty
  std::size_t epochs = 100;
  std::size_t batch_size = 1024;
  OptimizerConfig optimizer = OptimizerConfig::defaults(OptimizerKind::Adadelta);

  std::string summary() const;
};

struct ScoreVector {
  std::vector<std::string> app_ids;
  std::vector<double> scores;  // sigmoid outputs in (0, 1)
  std::vector<Label> labels;   // Unlabeled when unknown
};

// Errors: EmptyHiddenList, InvalidConfig for zero dims.
Net build_mlp(std::size_t embedding_dim, const MLPConfig& config,
              std::uint64_t seed);

// Trains on Train rows, validates on Validation rows. Errors: InvalidConfig
// when any row is Unlabeled, ShapeMismatch on width mismatches.
TrainHistory train_mlp(Net& mlp, const EmbeddingMatrix& embeddings,
                       const std::vector<Label>& labels,
                       const std::vector<Split>& split,
                       const MLPConfig& config, std::uint64_t seed);

// Scores every embedding row.
ScoreVector predict(const Net& mlp, const EmbeddingMatrix& embeddings,
                    const std::vector<Label>& labels = {});

// CSV: app_id,score,label with scores at fixed 6 decimals.
void write_scores_csv(const ScoreVector& scores,
                      const std::filesystem::path& path);
ScoreVector read_scores_csv(const std::filesystem::path& path);

}  // namespace intentnet
