#include "intentnet/classifier.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "intentnet/errors.hpp"
#include "intentnet/rng.hpp"

namespace intentnet {

std::string MLPConfig::summary() const {
  std::ostringstream out;
  out << "mlp hidden=[";
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    out << (i ? " " : "") << hidden[i];
  }
  out << "] optimizer=" << optimizer_name(optimizer.kind)
      << " epochs=" << epochs << " batch=" << batch_size;
  return out.str();
}

Net build_mlp(std::size_t embedding_dim, const MLPConfig& config,
              std::uint64_t seed) {
  if (config.hidden.empty()) {
    throw Error(Errc::EmptyHiddenList,
                "classifier needs at least one hidden layer");
  }
  if (embedding_dim == 0) {
    throw Error(Errc::InvalidConfig, "embedding_dim must be positive");
  }
  Rng rng(seed);
  Net net;
  std::size_t prev = embedding_dim;
  for (const std::size_t h : config.hidden) {
    if (h == 0) {
      throw Error(Errc::InvalidConfig, "hidden width must be positive");
    }
    net.push_back(make_dense(prev, h, Activation::ReLU, rng));
    prev = h;
  }
  net.push_back(make_dense(prev, 1, Activation::Sigmoid, rng));
  return net;
}

namespace {

Matrix label_targets(const std::vector<Label>& labels) {
  Matrix target(labels.size(), 1);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] == Label::Unlabeled) {
      throw Error(Errc::InvalidConfig,
                  "cannot train on an unlabeled sample (row " +
                      std::to_string(r) + ")");
    }
    target.at(r, 0) = labels[r] == Label::Malicious ? 1.0 : 0.0;
  }
  return target;
}

}  // namespace

TrainHistory train_mlp(Net& mlp, const EmbeddingMatrix& embeddings,
                       const std::vector<Label>& labels,
                       const std::vector<Split>& split,
                       const MLPConfig& config, std::uint64_t seed) {
  if (embeddings.values.rows != labels.size() ||
      labels.size() != split.size()) {
    throw Error(Errc::ShapeMismatch, "embeddings/labels/split row counts");
  }
  const Matrix target = label_targets(labels);
  TrainConfig tc;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.seed = seed;
  tc.loss = LossKind::BinaryCrossEntropy;
  Optimizer optimizer(config.optimizer, mlp);
  return fit(mlp, embeddings.values, target, split, tc, optimizer);
}

ScoreVector predict(const Net& mlp, const EmbeddingMatrix& embeddings,
                    const std::vector<Label>& labels) {
  if (net_output_dim(mlp) != 1) {
    throw Error(Errc::ShapeMismatch, "classifier must have one output");
  }
  ScoreVector out;
  out.app_ids = embeddings.app_ids;
  if (labels.empty()) {
    out.labels.assign(embeddings.app_ids.size(), Label::Unlabeled);
  } else {
    if (labels.size() != embeddings.app_ids.size()) {
      throw Error(Errc::ShapeMismatch, "labels vs embedding rows");
    }
    out.labels = labels;
  }
  if (embeddings.values.rows == 0) {
    return out;
  }
  const ForwardTrace trace = forward(mlp, embeddings.values);
  out.scores.reserve(trace.output().rows);
  for (std::size_t r = 0; r < trace.output().rows; ++r) {
    out.scores.push_back(trace.output().at(r, 0));
  }
  return out;
}

void write_scores_csv(const ScoreVector& scores,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << "app_id,score,label\n";
  char buf[32];
  for (std::size_t i = 0; i < scores.app_ids.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", scores.scores[i]);
    out << scores.app_ids[i] << ',' << buf << ','
        << label_name(scores.labels[i]) << '\n';
  }
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

ScoreVector read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoFailure, "cannot read " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) ||
      (line != "app_id,score,label" && line != "app_id,score,label\r")) {
    throw Error(Errc::IoFailure,
                "scores file must start with app_id,score,label: " +
                    path.string());
  }
  ScoreVector out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error(Errc::IoFailure, "bad scores row: " + line);
    }
    out.app_ids.push_back(line.substr(0, c1));
    try {
      out.scores.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    } catch (const std::exception&) {
      throw Error(Errc::IoFailure, "bad score cell: " + line);
    }
    out.labels.push_back(label_from(line.substr(c2 + 1)));
  }
  return out;
}

}  // namespace intentnet
