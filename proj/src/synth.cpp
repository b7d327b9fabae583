#include "intentnet/synth.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "intentnet/errors.hpp"
#include "intentnet/rng.hpp"

namespace intentnet {

GeneratorSpec GeneratorSpec::contrast(std::size_t n_malicious,
                                      std::size_t n_benign,
                                      std::size_t vocab_size,
                                      std::size_t contrast_keys,
                                      double p_mal_hi, double p_ben_lo,
                                      double p_background,
                                      std::uint64_t seed) {
  GeneratorSpec spec;
  spec.n_malicious = n_malicious;
  spec.n_benign = n_benign;
  spec.seed = seed;
  spec.keys.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    GeneratorKey key;
    key.kind = static_cast<IntentKind>(i % 3);
    char name[32];
    std::snprintf(name, sizeof(name), "KEY_%03zu", i);
    key.name = name;
    key.raw = std::string("com.synth.intent.") +
              intent_kind_name(key.kind) + "." + name;
    if (i < contrast_keys) {
      key.p_malicious = p_mal_hi;
      key.p_benign = p_ben_lo;
    } else {
      key.p_malicious = p_background;
      key.p_benign = p_background;
    }
    spec.keys.push_back(std::move(key));
  }
  return spec;
}

void validate_spec(const GeneratorSpec& spec) {
  if (spec.n_malicious == 0 || spec.n_benign == 0) {
    throw Error(Errc::InvalidConfig, "both classes need at least one app");
  }
  if (spec.keys.size() < 2) {
    throw Error(Errc::InvalidConfig, "vocabulary needs at least 2 keys");
  }
  if (spec.repeat_max == 0) {
    throw Error(Errc::InvalidConfig, "repeat_max must be >= 1");
  }
  std::set<std::pair<IntentKind, std::string>> seen;
  for (const auto& key : spec.keys) {
    if (!(key.p_malicious >= 0.0 && key.p_malicious <= 1.0) ||
        !(key.p_benign >= 0.0 && key.p_benign <= 1.0)) {
      throw Error(Errc::InvalidConfig,
                  "emission probability outside [0,1] for " + key.name);
    }
    if (normalize_intent_name(key.raw) != key.name) {
      throw Error(Errc::InvalidConfig,
                  "raw '" + key.raw + "' does not normalize to '" + key.name +
                      "'");
    }
    if (!seen.insert({key.kind, key.name}).second) {
      throw Error(Errc::InvalidConfig, "duplicate key " + key.name);
    }
    if (key.kind == IntentKind::Extra &&
        key.raw.find(".intent.extra.") == std::string::npos) {
      throw Error(Errc::InvalidConfig,
                  "extra key raw must contain .intent.extra.: " + key.raw);
    }
  }
}

GeneratedCorpus draw_corpus(const GeneratorSpec& spec) {
  validate_spec(spec);
  const std::size_t n_apps = spec.n_malicious + spec.n_benign;
  GeneratedCorpus out;
  out.keys = spec.keys;
  out.app_ids.reserve(n_apps);
  out.labels.reserve(n_apps);
  out.emission = Matrix(n_apps, spec.keys.size());

  Rng rng(spec.seed);
  for (std::size_t a = 0; a < n_apps; ++a) {
    char id[32];
    std::snprintf(id, sizeof(id), "app_%04zu", a);
    out.app_ids.push_back(id);
    const Label label =
        a < spec.n_malicious ? Label::Malicious : Label::Benign;
    out.labels.push_back(label);
    for (std::size_t k = 0; k < spec.keys.size(); ++k) {
      const double p = label == Label::Malicious ? spec.keys[k].p_malicious
                                                 : spec.keys[k].p_benign;
      if (rng.bernoulli(p)) {
        const std::uint32_t count =
            spec.repeat_max == 1
                ? 1u
                : 1u + static_cast<std::uint32_t>(rng.below(spec.repeat_max));
        out.emission.at(a, k) = static_cast<double>(count);
      }
    }
  }
  return out;
}

std::string render_manifest(const std::string& app_id,
                            const std::vector<GeneratorKey>& keys,
                            const std::vector<std::uint32_t>& counts) {
  if (counts.size() != keys.size()) {
    throw Error(Errc::ShapeMismatch, "counts vs keys");
  }

  // Expand filter-borne occurrences and spread them over up to three
  // activities so nesting varies a little; extras become meta-data values.
  std::vector<std::size_t> filter_entries;
  std::vector<std::size_t> extra_entries;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (std::uint32_t c = 0; c < counts[k]; ++c) {
      if (keys[k].kind == IntentKind::Extra) {
        extra_entries.push_back(k);
      } else {
        filter_entries.push_back(k);
      }
    }
  }

  constexpr std::size_t kActivityBuckets = 3;
  std::vector<std::vector<std::size_t>> buckets(kActivityBuckets);
  for (std::size_t i = 0; i < filter_entries.size(); ++i) {
    buckets[i % kActivityBuckets].push_back(filter_entries[i]);
  }

  std::ostringstream xml;
  xml << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  xml << "<manifest xmlns:android=\"http://schemas.android.com/apk/res/android\""
      << " package=\"com.synth." << app_id << "\">\n";
  xml << "    <application android:label=\"" << app_id << "\">\n";
  std::size_t activity = 0;
  for (const auto& bucket : buckets) {
    if (bucket.empty()) {
      continue;
    }
    xml << "        <activity android:name=\".Activity" << activity++
        << "\">\n";
    xml << "            <intent-filter>\n";
    for (const std::size_t k : bucket) {
      xml << "                <" << intent_kind_name(keys[k].kind)
          << " android:name=\"" << keys[k].raw << "\"/>\n";
    }
    xml << "            </intent-filter>\n";
    xml << "        </activity>\n";
  }
  for (std::size_t i = 0; i < extra_entries.size(); ++i) {
    xml << "        <meta-data android:name=\"payload_" << i
        << "\" android:value=\"" << keys[extra_entries[i]].raw << "\"/>\n";
  }
  xml << "    </application>\n";
  xml << "</manifest>\n";
  return xml.str();
}

GeneratedCorpus generate_corpus(const GeneratorSpec& spec,
                                const std::filesystem::path& out_dir) {
  GeneratedCorpus corpus = draw_corpus(spec);

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "manifests", ec);
  if (ec) {
    throw Error(Errc::IoFailure, "cannot create " + out_dir.string());
  }

  for (std::size_t a = 0; a < corpus.app_ids.size(); ++a) {
    std::vector<std::uint32_t> counts(corpus.keys.size());
    for (std::size_t k = 0; k < corpus.keys.size(); ++k) {
      counts[k] = static_cast<std::uint32_t>(corpus.emission.at(a, k));
    }
    const auto path = out_dir / "manifests" / (corpus.app_ids[a] + ".xml");
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      throw Error(Errc::IoFailure, "cannot write " + path.string());
    }
    file << render_manifest(corpus.app_ids[a], corpus.keys, counts);
  }

  {
    std::ofstream labels(out_dir / "labels.csv", std::ios::binary);
    if (!labels) {
      throw Error(Errc::IoFailure, "cannot write labels.csv");
    }
    labels << "app_id,label\n";
    for (std::size_t a = 0; a < corpus.app_ids.size(); ++a) {
      labels << corpus.app_ids[a] << ',' << label_name(corpus.labels[a])
             << '\n';
    }
  }

  {
    nlohmann::ordered_json doc;
    doc["seed"] = spec.seed;
    doc["repeat_max"] = spec.repeat_max;
    doc["keys"] = nlohmann::ordered_json::array();
    for (const auto& key : corpus.keys) {
      doc["keys"].push_back({{"kind", intent_kind_name(key.kind)},
                             {"name", key.name},
                             {"raw", key.raw},
                             {"p_malicious", key.p_malicious},
                             {"p_benign", key.p_benign}});
    }
    doc["apps"] = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < corpus.app_ids.size(); ++a) {
      std::vector<std::uint64_t> counts(corpus.keys.size());
      for (std::size_t k = 0; k < corpus.keys.size(); ++k) {
        counts[k] = static_cast<std::uint64_t>(corpus.emission.at(a, k));
      }
      doc["apps"].push_back({{"app_id", corpus.app_ids[a]},
                             {"label", label_name(corpus.labels[a])},
                             {"counts", counts}});
    }
    std::ofstream truth(out_dir / "ground_truth.json", std::ios::binary);
    if (!truth) {
      throw Error(Errc::IoFailure, "cannot write ground_truth.json");
    }
    truth << doc.dump(2) << '\n';
  }

  return corpus;
}

GeneratorSpec read_generator_spec_json(const std::filesystem::path& path) {
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
  GeneratorSpec spec;
  try {
    spec.n_malicious = doc.at("n_malicious").get<std::size_t>();
    spec.n_benign = doc.at("n_benign").get<std::size_t>();
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.repeat_max = doc.value("repeat_max", std::uint32_t{1});
    for (const auto& k : doc.at("keys")) {
      GeneratorKey key;
      key.kind = intent_kind_from(k.at("kind").get<std::string>());
      key.raw = k.at("raw").get<std::string>();
      key.name = k.contains("name") ? k.at("name").get<std::string>()
                                    : normalize_intent_name(key.raw);
      key.p_malicious = k.at("p_malicious").get<double>();
      key.p_benign = k.at("p_benign").get<double>();
      spec.keys.push_back(std::move(key));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig,
                "bad generator spec " + path.string() + ": " + e.what());
  }
  validate_spec(spec);
  return spec;
}

void write_generator_spec_json(const GeneratorSpec& spec,
                               const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["n_malicious"] = spec.n_malicious;
  doc["n_benign"] = spec.n_benign;
  doc["seed"] = spec.seed;
  doc["repeat_max"] = spec.repeat_max;
  doc["keys"] = nlohmann::ordered_json::array();
  for (const auto& key : spec.keys) {
    doc["keys"].push_back({{"kind", intent_kind_name(key.kind)},
                           {"name", key.name},
                           {"raw", key.raw},
                           {"p_malicious", key.p_malicious},
                           {"p_benign", key.p_benign}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

}  // namespace intentnet
