#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "intentnet/features.hpp"
#include "intentnet/manifest.hpp"

namespace intentnet {

struct IntentStats {
  IntentKey key;
  std::uint64_t count_mal = 0;
  std::uint64_t count_ben = 0;
  // 2*(count_mal - count_ben) / (count_mal + count_ben); see
  // normalized_difference(). Filled by fill_normalized().
  double norm_diff_mal = 0.0;
};

enum class RankBy { CountMal, CountBen, NormDiffMal };

struct RankedStat {
  IntentStats stats;
  std::size_t rank = 0;  // competition ranking, 1-based
};

// Per-class occurrence totals for every key in the corpus, sorted by
// (kind, name). Counts are multiset totals (an app declaring a key three
// times contributes three). Errors: EmptyCorpus, MissingClass when either
// class has no samples.
std::vector<IntentStats> class_counts(const Corpus& corpus);

// The same totals from an already-vectorized matrix (per-class column sums).
// With binarized features these are presence counts rather than occurrence
// counts.
std::vector<IntentStats> class_counts(const FeatureMatrix& features,
                                      const Vocabulary& vocab);

// Normalized count difference between the classes, in [-2, 2]:
//   d(a, b) = 2 * (a - b) / (a + b)
// +2 exactly when b == 0, -2 exactly when a == 0, 0 when a == b.
// Errors: BothZero when a == b == 0.
double normalized_difference(std::uint64_t count_mal, std::uint64_t count_ben);

// Fills norm_diff_mal on every row.
void fill_normalized(std::vector<IntentStats>& stats);

// Sorts descending by the chosen metric (ties keep (kind, name) order) and
// assigns competition ranks: equal values share a rank and the next distinct
// value gets rank = its 1-based position. Returns at most k rows; k = 0
// means all.
std::vector<RankedStat> top_k(std::vector<IntentStats> stats, RankBy by,
                              std::size_t k);

// CSV: kind,name,count_mal,count_ben,norm_diff,rank.
void write_stats_csv(const std::vector<RankedStat>& rows,
                     const std::filesystem::path& path);

}  // namespace intentnet
