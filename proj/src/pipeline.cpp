#include "intentnet/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "config_json.hpp"
#include "intentnet/errors.hpp"
#include "intentnet/rng.hpp"

namespace intentnet {

namespace {

// Independent seed streams for the four random stages of one run.
enum SeedStream : std::uint64_t {
  kAeInit = 1,
  kAeFit = 2,
  kMlpInit = 3,
  kMlpFit = 4,
};

std::uint64_t stream_seed(std::uint64_t base, SeedStream stream) {
  return splitmix64(base ^ (0x9E3779B97F4A7C15ULL * stream));
}

}  // namespace

PipelineResult run_pipeline(const FeatureMatrix& features,
                            const PipelineConfig& config) {
  if (features.rows() == 0) {
    throw Error(Errc::EmptyCorpus, "no feature rows");
  }

  PipelineResult result;

  result.ae_net = build_sae(features.values.cols, config.ae,
                            stream_seed(config.seed, kAeInit));
  result.ae_history = train_ae(result.ae_net, features, config.ae,
                               stream_seed(config.seed, kAeFit));
  result.ae_val_loss = result.ae_history.val_loss.empty()
                           ? result.ae_history.train_loss.back()
                           : result.ae_history.val_loss.back();

  result.embeddings = encode(result.ae_net, config.ae.encoder_layer_count(),
                             features, config.ae.summary());

  result.mlp_net = build_mlp(config.ae.embedding_dim, config.mlp,
                             stream_seed(config.seed, kMlpInit));
  result.mlp_history =
      train_mlp(result.mlp_net, result.embeddings, features.labels,
                features.split, config.mlp, stream_seed(config.seed, kMlpFit));

  result.scores = predict(result.mlp_net, result.embeddings, features.labels);

  std::vector<double> val_scores;
  std::vector<Label> val_labels;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    if (features.split[r] == Split::Validation) {
      val_scores.push_back(result.scores.scores[r]);
      val_labels.push_back(features.labels[r]);
    }
  }
  if (val_scores.empty()) {
    throw Error(Errc::InvalidConfig, "no validation rows to evaluate");
  }

  result.roc = roc_auc(val_scores, val_labels);
  result.fixed05 =
      select_threshold(val_scores, val_labels, ThresholdPolicy::Fixed05);
  result.best_accuracy =
      select_threshold(val_scores, val_labels, ThresholdPolicy::BestAccuracy);
  result.best_f1 =
      select_threshold(val_scores, val_labels, ThresholdPolicy::BestF1);
  return result;
}

PipelineConfig default_pipeline_config() {
  PipelineConfig config;
  config.ae.hidden = {128, 64};
  config.ae.embedding_dim = 32;
  config.ae.epochs = 1000;
  config.ae.batch_size = 1024;
  config.ae.optimizer = OptimizerConfig::defaults(OptimizerKind::RMSProp);
  config.mlp.hidden = {64, 64, 64, 64};
  config.mlp.epochs = 1000;
  config.mlp.batch_size = 1024;
  config.mlp.optimizer = OptimizerConfig::defaults(OptimizerKind::RMSProp);
  return config;
}

PipelineConfig read_train_config_json(const std::filesystem::path& path) {
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
  PipelineConfig config = default_pipeline_config();
  try {
    if (doc.contains("ae")) {
      config.ae = detail::parse_ae_config(doc.at("ae"));
    }
    if (doc.contains("mlp")) {
      config.mlp = detail::parse_mlp_config(doc.at("mlp"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig,
                "bad train config " + path.string() + ": " + e.what());
  }
  return config;
}

}  // namespace intentnet
