#include "intentnet/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "intentnet/errors.hpp"
#include "intentnet/rng.hpp"

namespace intentnet {

const char* split_name(Split s) {
  return s == Split::Train ? "train" : "validation";
}

Split split_from(std::string_view s) {
  if (s == "train") {
    return Split::Train;
  }
  if (s == "validation") {
    return Split::Validation;
  }
  throw Error(Errc::IoFailure, "unknown split value: " + std::string(s));
}

std::size_t Vocabulary::index_of(IntentKind kind,
                                 std::string_view name) const {
  const auto it = std::lower_bound(
      keys.begin(), keys.end(), std::pair(kind, name),
      [](const IntentKey& k, const std::pair<IntentKind, std::string_view>& q) {
        if (k.kind != q.first) {
          return k.kind < q.first;
        }
        return std::string_view(k.name) < q.second;
      });
  if (it == keys.end() || it->kind != kind || it->name != name) {
    return npos;
  }
  return static_cast<std::size_t>(it - keys.begin());
}

Vocabulary build_vocabulary(const Corpus& corpus) {
  if (corpus.samples.empty()) {
    throw Error(Errc::EmptyCorpus, "cannot build a vocabulary from no samples");
  }
  // std::map iteration is already (kind, name)-sorted; merging sample maps
  // keeps the first raw string seen for a key (sample order is fixed).
  std::map<IntentKey, std::string> merged;
  for (const auto& sample : corpus.samples) {
    for (const auto& [key, count] : sample.intents) {
      merged.try_emplace(key, key.raw);
    }
  }
  Vocabulary vocab;
  vocab.keys.reserve(merged.size());
  for (auto& [key, raw] : merged) {
    IntentKey k = key;
    k.raw = raw;
    vocab.keys.push_back(std::move(k));
  }
  vocab.frozen_from = corpus_fingerprint(corpus);
  return vocab;
}

FeatureMatrix vectorize(const Corpus& corpus, const Vocabulary& vocab,
                        bool binarize) {
  FeatureMatrix out;
  out.binarized = binarize;
  out.app_ids.reserve(corpus.samples.size());
  out.labels.reserve(corpus.samples.size());
  out.values = Matrix(corpus.samples.size(), vocab.size());
  out.split.assign(corpus.samples.size(), Split::Train);
  for (std::size_t r = 0; r < corpus.samples.size(); ++r) {
    const auto& sample = corpus.samples[r];
    out.app_ids.push_back(sample.app_id);
    out.labels.push_back(sample.label);
    for (const auto& [key, count] : sample.intents) {
      const std::size_t col = vocab.index_of(key.kind, key.name);
      if (col == Vocabulary::npos) {
        continue;  // unseen at vocabulary-freeze time
      }
      out.values.at(r, col) =
          binarize ? 1.0 : static_cast<double>(count);
    }
  }
  return out;
}

void split_train_validation(FeatureMatrix& features, double train_fraction,
                            std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "train_fraction must be in (0,1)");
  }
  std::vector<std::size_t> mal;
  std::vector<std::size_t> ben;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    if (features.labels[r] == Label::Malicious) {
      mal.push_back(r);
    } else if (features.labels[r] == Label::Benign) {
      ben.push_back(r);
    }
  }
  if (mal.empty() || ben.empty()) {
    throw Error(Errc::MissingClass,
                mal.empty() ? "no malicious samples" : "no benign samples");
  }

  Rng rng(seed);
  auto assign = [&](std::vector<std::size_t>& rows, const char* what) {
    if (rows.size() < 2) {
      throw Error(Errc::ClassTooSmall,
                  std::string(what) + " class needs at least 2 samples");
    }
    rng.shuffle(rows);
    std::size_t n_train = static_cast<std::size_t>(
        std::llround(static_cast<double>(rows.size()) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, rows.size() - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      features.split[rows[i]] =
          i < n_train ? Split::Train : Split::Validation;
    }
  };
  assign(mal, "malicious");
  assign(ben, "benign");
}

// --- serialization ---------------------------------------------------------

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void write_features_csv(const FeatureMatrix& features, const Vocabulary& vocab,
                        const std::filesystem::path& path) {
  if (features.values.cols != vocab.size()) {
    throw Error(Errc::ShapeMismatch, "feature columns vs vocabulary size");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << "app_id,label,split";
  for (const auto& key : vocab.keys) {
    out << ',' << intent_kind_name(key.kind) << ':' << key.name;
  }
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    out << features.app_ids[r] << ',' << label_name(features.labels[r]) << ','
        << split_name(features.split[r]);
    for (std::size_t c = 0; c < features.values.cols; ++c) {
      out << ',' << static_cast<long long>(features.values.at(r, c));
    }
    out << '\n';
  }
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

LoadedFeatures read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoFailure, "cannot read " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::IoFailure, "empty feature file: " + path.string());
  }
  const auto header = split_commas(strip_cr(line));
  if (header.size() < 3 || header[0] != "app_id" || header[1] != "label" ||
      header[2] != "split") {
    throw Error(Errc::IoFailure,
                "feature file must start with app_id,label,split: " +
                    path.string());
  }

  LoadedFeatures loaded;
  Vocabulary& vocab = loaded.vocab;
  for (std::size_t c = 3; c < header.size(); ++c) {
    const auto colon = header[c].find(':');
    if (colon == std::string::npos) {
      throw Error(Errc::IoFailure, "bad feature column name: " + header[c]);
    }
    IntentKey key;
    key.kind = intent_kind_from(header[c].substr(0, colon));
    key.name = header[c].substr(colon + 1);
    key.raw = key.name;
    vocab.keys.push_back(std::move(key));
  }
  if (!std::is_sorted(vocab.keys.begin(), vocab.keys.end())) {
    throw Error(Errc::IoFailure,
                "feature columns are not in vocabulary order: " +
                    path.string());
  }

  FeatureMatrix& f = loaded.features;
  std::vector<std::vector<double>> rows;
  bool all_binary = true;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::IoFailure, "bad feature row width: " + line);
    }
    f.app_ids.push_back(cells[0]);
    f.labels.push_back(label_from(cells[1]));
    f.split.push_back(split_from(cells[2]));
    std::vector<double> row(cells.size() - 3);
    for (std::size_t c = 3; c < cells.size(); ++c) {
      try {
        row[c - 3] = static_cast<double>(std::stoll(cells[c]));
      } catch (const std::exception&) {
        throw Error(Errc::IoFailure, "bad feature cell: " + cells[c]);
      }
      if (row[c - 3] != 0.0 && row[c - 3] != 1.0) {
        all_binary = false;
      }
    }
    rows.push_back(std::move(row));
  }
  f.values = Matrix(rows.size(), vocab.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), f.values.row(r));
  }
  f.binarized = all_binary;
  return loaded;
}

void write_vocabulary_json(const Vocabulary& vocab, bool binarized,
                           const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["frozen_from"] = vocab.frozen_from;
  doc["binarized"] = binarized;
  doc["keys"] = nlohmann::json::array();
  for (const auto& key : vocab.keys) {
    doc["keys"].push_back({{"kind", intent_kind_name(key.kind)},
                           {"name", key.name},
                           {"raw", key.raw}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

LoadedVocabulary read_vocabulary_json(const std::filesystem::path& path) {
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
  LoadedVocabulary loaded;
  loaded.vocab.frozen_from = doc.value("frozen_from", std::string());
  loaded.binarized = doc.value("binarized", true);
  for (const auto& k : doc.at("keys")) {
    IntentKey key;
    key.kind = intent_kind_from(k.at("kind").get<std::string>());
    key.name = k.at("name").get<std::string>();
    key.raw = k.value("raw", key.name);
    loaded.vocab.keys.push_back(std::move(key));
  }
  if (!std::is_sorted(loaded.vocab.keys.begin(), loaded.vocab.keys.end())) {
    throw Error(Errc::IoFailure,
                "vocabulary keys are not sorted: " + path.string());
  }
  return loaded;
}

}  // namespace intentnet
