#include "intentnet/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "intentnet/errors.hpp"

namespace intentnet {

std::vector<IntentStats> class_counts(const Corpus& corpus) {
  if (corpus.samples.empty()) {
    throw Error(Errc::EmptyCorpus, "no samples to count");
  }
  if (corpus.malicious_count == 0 || corpus.benign_count == 0) {
    throw Error(Errc::MissingClass,
                corpus.malicious_count == 0 ? "no malicious samples"
                                            : "no benign samples");
  }
  struct Cell {
    std::uint64_t mal = 0;
    std::uint64_t ben = 0;
    std::string raw;
  };
  std::map<IntentKey, Cell> table;
  for (const auto& sample : corpus.samples) {
    for (const auto& [key, count] : sample.intents) {
      auto [it, inserted] = table.try_emplace(key);
      if (inserted) {
        it->second.raw = key.raw;
      }
      if (sample.label == Label::Malicious) {
        it->second.mal += count;
      } else if (sample.label == Label::Benign) {
        it->second.ben += count;
      }
    }
  }
  std::vector<IntentStats> out;
  out.reserve(table.size());
  for (const auto& [key, cell] : table) {
    IntentStats row;
    row.key = key;
    row.key.raw = cell.raw;
    row.count_mal = cell.mal;
    row.count_ben = cell.ben;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<IntentStats> class_counts(const FeatureMatrix& features,
                                      const Vocabulary& vocab) {
  if (features.rows() == 0) {
    throw Error(Errc::EmptyCorpus, "no samples to count");
  }
  if (features.values.cols != vocab.size()) {
    throw Error(Errc::ShapeMismatch, "feature columns vs vocabulary size");
  }
  bool any_mal = false;
  bool any_ben = false;
  std::vector<IntentStats> out(vocab.size());
  for (std::size_t c = 0; c < vocab.size(); ++c) {
    out[c].key = vocab.keys[c];
  }
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const Label label = features.labels[r];
    if (label == Label::Malicious) {
      any_mal = true;
    } else if (label == Label::Benign) {
      any_ben = true;
    } else {
      continue;
    }
    for (std::size_t c = 0; c < vocab.size(); ++c) {
      const auto v = static_cast<std::uint64_t>(features.values.at(r, c));
      if (label == Label::Malicious) {
        out[c].count_mal += v;
      } else {
        out[c].count_ben += v;
      }
    }
  }
  if (!any_mal || !any_ben) {
    throw Error(Errc::MissingClass,
                !any_mal ? "no malicious samples" : "no benign samples");
  }
  // Keys never observed in either class carry no information and would make
  // the normalized difference undefined.
  std::erase_if(out, [](const IntentStats& s) {
    return s.count_mal == 0 && s.count_ben == 0;
  });
  return out;
}

double normalized_difference(std::uint64_t count_mal,
                             std::uint64_t count_ben) {
  if (count_mal == 0 && count_ben == 0) {
    throw Error(Errc::BothZero,
                "normalized difference is undefined for two zero counts");
  }
  // The boundary cases are returned exactly rather than trusting the
  // division to hit +/-2.0 on the nose.
  if (count_ben == 0) {
    return 2.0;
  }
  if (count_mal == 0) {
    return -2.0;
  }
  const double a = static_cast<double>(count_mal);
  const double b = static_cast<double>(count_ben);
  return 2.0 * (a - b) / (a + b);
}

void fill_normalized(std::vector<IntentStats>& stats) {
  for (auto& row : stats) {
    row.norm_diff_mal = normalized_difference(row.count_mal, row.count_ben);
  }
}

std::vector<RankedStat> top_k(std::vector<IntentStats> stats, RankBy by,
                              std::size_t k) {
  auto metric = [by](const IntentStats& s) -> double {
    switch (by) {
      case RankBy::CountMal:
        return static_cast<double>(s.count_mal);
      case RankBy::CountBen:
        return static_cast<double>(s.count_ben);
      case RankBy::NormDiffMal:
        return s.norm_diff_mal;
    }
    return 0.0;
  };

  // Tie groups stay (kind, name)-ordered no matter how the input arrived.
  std::sort(stats.begin(), stats.end(),
            [&](const IntentStats& a, const IntentStats& b) {
              if (metric(a) != metric(b)) {
                return metric(a) > metric(b);
              }
              return a.key < b.key;
            });

  std::vector<RankedStat> ranked;
  ranked.reserve(stats.size());
  std::size_t rank = 1;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (i > 0 && metric(stats[i]) != metric(stats[i - 1])) {
      rank = i + 1;
    }
    ranked.push_back(RankedStat{std::move(stats[i]), rank});
  }
  if (k > 0 && ranked.size() > k) {
    ranked.resize(k);
  }
  return ranked;
}

void write_stats_csv(const std::vector<RankedStat>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << "kind,name,count_mal,count_ben,norm_diff,rank\n";
  char buf[32];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", row.stats.norm_diff_mal);
    out << intent_kind_name(row.stats.key.kind) << ',' << row.stats.key.name
        << ',' << row.stats.count_mal << ',' << row.stats.count_ben << ','
        << buf << ',' << row.rank << '\n';
  }
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

}  // namespace intentnet
