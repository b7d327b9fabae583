#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "intentnet/manifest.hpp"
#include "intentnet/matrix.hpp"

namespace intentnet {

// Synthetic corpus generator: every app draws each vocabulary key as an
// independent Bernoulli with the class probability; a drawn key repeats
// uniformly in 1..repeat_max (repeat_max = 1 keeps presence/absence only).
// The generator is its own oracle: it records exactly which counts it wrote
// into each manifest, so parsing must reconstruct `emission` verbatim.
struct GeneratorKey {
  IntentKind kind = IntentKind::Action;
  std::string name;    // normalized form
  std::string raw;     // attribute string written into manifests
  double p_malicious = 0.0;
  double p_benign = 0.0;
};

struct GeneratorSpec {
  std::size_t n_malicious = 0;
  std::size_t n_benign = 0;
  std::vector<GeneratorKey> keys;
  std::uint64_t seed = 0;
  std::uint32_t repeat_max = 1;

  // Convenience builder: `vocab_size` keys cycling through the three kinds;
  // the first `contrast_keys` use (p_mal_hi, p_ben_lo), the rest share
  // p_background in both classes.
  static GeneratorSpec contrast(std::size_t n_malicious, std::size_t n_benign,
                                std::size_t vocab_size,
                                std::size_t contrast_keys, double p_mal_hi,
                                double p_ben_lo, double p_background,
                                std::uint64_t seed);
};

struct GeneratedCorpus {
  std::vector<std::string> app_ids;   // app_0000, app_0001, ...
  std::vector<Label> labels;
  Matrix emission;                    // apps x keys, occurrence counts
  std::vector<GeneratorKey> keys;
};

// Validates the spec (InvalidConfig: empty classes, vocab < 2, probabilities
// outside [0,1], repeat_max = 0, duplicate (kind,name), names or raws that
// do not normalize back to the key).
void validate_spec(const GeneratorSpec& spec);

// Draws the corpus in memory (no files).
GeneratedCorpus draw_corpus(const GeneratorSpec& spec);

// Draws and writes <out_dir>/manifests/<app_id>.xml, <out_dir>/labels.csv
// and <out_dir>/ground_truth.json (the emission matrix).
GeneratedCorpus generate_corpus(const GeneratorSpec& spec,
                                const std::filesystem::path& out_dir);

// Manifest text for one app given per-key counts (exposed for tests).
std::string render_manifest(const std::string& app_id,
                            const std::vector<GeneratorKey>& keys,
                            const std::vector<std::uint32_t>& counts);

GeneratorSpec read_generator_spec_json(const std::filesystem::path& path);
void write_generator_spec_json(const GeneratorSpec& spec,
                               const std::filesystem::path& path);

}  // namespace intentnet
