#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "intentnet/manifest.hpp"
#include "intentnet/matrix.hpp"

namespace intentnet {

enum class Split { Train, Validation };

const char* split_name(Split s);
Split split_from(std::string_view s);

// Ordered feature dictionary, frozen from one corpus. Keys are sorted by
// (kind, name) so the column order never depends on traversal details.
struct Vocabulary {
  std::vector<IntentKey> keys;
  std::string frozen_from;  // corpus fingerprint

  std::size_t size() const { return keys.size(); }

  // Index of (kind, name) by binary search over the sorted keys, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(IntentKind kind, std::string_view name) const;
};

struct FeatureMatrix {
  std::vector<std::string> app_ids;
  std::vector<Label> labels;
  std::vector<Split> split;
  Matrix values;  // app_ids.size() x vocabulary size
  bool binarized = true;

  std::size_t rows() const { return app_ids.size(); }
};

// Union of all keys in the corpus, sorted. Errors: EmptyCorpus.
Vocabulary build_vocabulary(const Corpus& corpus);

// Maps each sample onto the vocabulary columns. Keys outside the vocabulary
// are dropped (the vocabulary is frozen before any split, and prediction
// must tolerate unseen keys). binarize=true stores presence 0/1, otherwise
// occurrence counts. All rows start in the Train split.
FeatureMatrix vectorize(const Corpus& corpus, const Vocabulary& vocab,
                        bool binarize = true);

// Deterministic stratified split: shuffles each class with the seeded RNG
// and marks the first round(n_class * train_fraction) rows Train, clamped so
// both sides of every class stay non-empty. Errors: InvalidConfig for a
// fraction outside (0,1), ClassTooSmall when a class has < 2 rows,
// MissingClass when a class is absent.
void split_train_validation(FeatureMatrix& features, double train_fraction,
                            std::uint64_t seed);

// --- serialization ---------------------------------------------------------

// CSV with header app_id,label,split,<kind:name>... and integer cells.
void write_features_csv(const FeatureMatrix& features, const Vocabulary& vocab,
                        const std::filesystem::path& path);
struct LoadedFeatures {
  FeatureMatrix features;
  Vocabulary vocab;
};
LoadedFeatures read_features_csv(const std::filesystem::path& path);

void write_vocabulary_json(const Vocabulary& vocab, bool binarized,
                           const std::filesystem::path& path);
struct LoadedVocabulary {
  Vocabulary vocab;
  bool binarized = true;
};
LoadedVocabulary read_vocabulary_json(const std::filesystem::path& path);

}  // namespace intentnet
