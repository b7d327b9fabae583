// Command-line driver: extract | analyze | train | sweep | predict | synth.
// Every command writes its artifacts plus a run_manifest.json into --out and
// exits 0 iff it succeeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "intentnet/autoencoder.hpp"
#include "intentnet/classifier.hpp"
#include "intentnet/errors.hpp"
#include "intentnet/features.hpp"
#include "intentnet/kernels.hpp"
#include "intentnet/manifest.hpp"
#include "intentnet/metrics.hpp"
#include "intentnet/pipeline.hpp"
#include "intentnet/runmeta.hpp"
#include "intentnet/stats.hpp"
#include "intentnet/sweep.hpp"
#include "intentnet/synth.hpp"
#include "intentnet/version.hpp"

namespace fs = std::filesystem;
using namespace intentnet;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoFailure, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// app_id -> label side table for predict; unlike the training loader it
// tolerates ids without a manifest and the "unlabeled" value.
std::map<std::string, Label> read_label_map(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::LabelFileMissing, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::InvalidConfig, "empty label file: " + path.string());
  }
  std::map<std::string, Label> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(Errc::InvalidConfig,
                  path.string() + ": expected app_id,label: " + line);
    }
    out[line.substr(0, comma)] = label_from(line.substr(comma + 1));
  }
  return out;
}

// Scans a directory of decoded manifests without requiring labels; apps not
// present in `labels` stay Unlabeled. Files are taken in sorted name order.
Corpus load_manifest_dir(const fs::path& dir,
                         const std::map<std::string, Label>& labels) {
  if (!fs::is_directory(dir)) {
    throw Error(Errc::ManifestFileMissing, "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  Corpus corpus;
  for (const auto& file : files) {
    AppSample sample;
    sample.app_id = file.stem().string();
    if (auto it = labels.find(sample.app_id); it != labels.end()) {
      sample.label = it->second;
    }
    try {
      sample.intents = parse_manifest(slurp(file));
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.what());
    }
    if (sample.label == Label::Malicious) {
      ++corpus.malicious_count;
    } else if (sample.label == Label::Benign) {
      ++corpus.benign_count;
    }
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

RunManifest base_manifest(const std::string& command, std::uint64_t seed) {
  RunManifest rm;
  rm.command = command;
  rm.version = kVersion;
  rm.seed = seed;
  rm.backend = kernels::backend_name(kernels::active_backend());
  return rm;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicit-intent malware detection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  std::uint64_t seed = 0;
  std::string backend;
  bool json_errors = false;
  auto* seed_opt =
      app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
  app.add_option("--backend", backend,
                 "numeric backend: scalar or avx2 (default: autodetect)");
  app.add_flag("--json-errors", json_errors,
               "print machine-readable error JSON on stderr");

  auto apply_backend = [&] {
    if (backend.empty()) {
      return;
    }
    if (backend == "scalar") {
      kernels::force_backend(kernels::Backend::Scalar);
    } else if (backend == "avx2") {
      kernels::force_backend(kernels::Backend::Avx2);
    } else {
      throw Error(Errc::InvalidConfig, "unknown backend: " + backend);
    }
  };

  // --- extract --------------------------------------------------------------
  auto* cmd_extract = app.add_subcommand(
      "extract", "parse a labeled manifest corpus into a feature matrix");
  fs::path ex_manifests, ex_labels, ex_out;
  double ex_fraction = 0.7;
  bool ex_counts = false;
  unsigned ex_workers = 1;
  cmd_extract->add_option("--manifests", ex_manifests, "directory of <app_id>.xml files")
      ->required();
  cmd_extract->add_option("--labels", ex_labels, "CSV: app_id,label")->required();
  cmd_extract->add_option("--out", ex_out, "output directory")->required();
  cmd_extract->add_option("--train-fraction", ex_fraction,
                          "per-class training fraction")
      ->capture_default_str();
  cmd_extract->add_flag("--counts", ex_counts,
                        "store occurrence counts instead of 0/1 presence");
  cmd_extract->add_option("--workers", ex_workers, "parallel manifest parsers")
      ->capture_default_str();
  cmd_extract->callback([&] {
    apply_backend();
    auto t0 = Clock::now();
    Corpus corpus = load_corpus(ex_manifests, ex_labels, ex_workers);
    Vocabulary vocab = build_vocabulary(corpus);
    FeatureMatrix features = vectorize(corpus, vocab, !ex_counts);
    split_train_validation(features, ex_fraction, seed);
    fs::create_directories(ex_out);
    write_features_csv(features, vocab, ex_out / "features.csv");
    write_vocabulary_json(vocab, features.binarized, ex_out / "vocabulary.json");

    RunManifest rm = base_manifest("extract", seed);
    rm.inputs = {{ex_labels.string(), file_fingerprint(ex_labels)},
                 {ex_manifests.string(), corpus_fingerprint(corpus)}};
    rm.outputs = {"features.csv", "vocabulary.json"};
    char summary[128];
    std::snprintf(summary, sizeof(summary), "train_fraction=%g binarized=%d",
                  ex_fraction, ex_counts ? 0 : 1);
    rm.config_summary = summary;
    rm.total_seconds = seconds_since(t0);
    write_run_manifest(rm, ex_out);

    std::cout << "extracted " << corpus.samples.size() << " apps ("
              << corpus.malicious_count << " malicious, " << corpus.benign_count
              << " benign), " << vocab.size() << " intent keys -> "
              << (ex_out / "features.csv").string() << "\n";
    if (corpus.ignored_files > 0) {
      std::cerr << "note: " << corpus.ignored_files
                << " manifest file(s) had no label row and were ignored\n";
    }
  });

  // --- analyze ----------------------------------------------------------------
  auto* cmd_analyze = app.add_subcommand(
      "analyze", "rank intents by per-class counts and normalized difference");
  fs::path an_manifests, an_labels, an_features, an_out;
  std::size_t an_k = 10;
  unsigned an_workers = 1;
  auto* an_manifests_opt =
      cmd_analyze->add_option("--manifests", an_manifests, "directory of <app_id>.xml files");
  auto* an_labels_opt =
      cmd_analyze->add_option("--labels", an_labels, "CSV: app_id,label");
  cmd_analyze->add_option("--features", an_features, "features.csv from extract")
      ->excludes(an_manifests_opt)
      ->excludes(an_labels_opt);
  cmd_analyze->add_option("-k,--top", an_k, "rows per table")
      ->capture_default_str();
  cmd_analyze->add_option("--out", an_out, "output directory")->required();
  cmd_analyze->add_option("--workers", an_workers, "parallel manifest parsers")
      ->capture_default_str();
  cmd_analyze->callback([&] {
    apply_backend();
    auto t0 = Clock::now();
    if (an_k == 0) {
      throw Error(Errc::InvalidConfig, "-k must be >= 1");
    }
    std::vector<IntentStats> stats;
    RunManifest rm = base_manifest("analyze", seed);
    if (!an_features.empty()) {
      LoadedFeatures loaded = read_features_csv(an_features);
      stats = class_counts(loaded.features, loaded.vocab);
      rm.inputs = {{an_features.string(), file_fingerprint(an_features)}};
    } else {
      if (an_manifests.empty() || an_labels.empty()) {
        throw Error(Errc::InvalidConfig,
                    "provide --features or both --manifests and --labels");
      }
      Corpus corpus = load_corpus(an_manifests, an_labels, an_workers);
      stats = class_counts(corpus);
      rm.inputs = {{an_labels.string(), file_fingerprint(an_labels)},
                   {an_manifests.string(), corpus_fingerprint(corpus)}};
    }
    fill_normalized(stats);
    fs::create_directories(an_out);
    write_stats_csv(top_k(stats, RankBy::CountMal, an_k),
                    an_out / "counts_malicious.csv");
    write_stats_csv(top_k(stats, RankBy::CountBen, an_k),
                    an_out / "counts_benign.csv");
    write_stats_csv(top_k(stats, RankBy::NormDiffMal, an_k),
                    an_out / "contrast.csv");

    rm.outputs = {"counts_malicious.csv", "counts_benign.csv", "contrast.csv"};
    rm.config_summary = "k=" + std::to_string(an_k);
    rm.total_seconds = seconds_since(t0);
    write_run_manifest(rm, an_out);
    std::cout << "ranked " << stats.size() << " intent keys -> "
              << an_out.string() << "\n";
  });

  // --- train ------------------------------------------------------------------
  auto* cmd_train = app.add_subcommand(
      "train", "fit the autoencoder + classifier pipeline and evaluate it");
  fs::path tr_features, tr_config, tr_out;
  cmd_train->add_option("--features", tr_features, "features.csv from extract")
      ->required();
  cmd_train->add_option("--config", tr_config,
                        "training config JSON (defaults when omitted)");
  cmd_train->add_option("--out", tr_out, "output directory")->required();
  cmd_train->callback([&] {
    apply_backend();
    auto t0 = Clock::now();
    LoadedFeatures loaded = read_features_csv(tr_features);
    PipelineConfig config = tr_config.empty() ? default_pipeline_config()
                                              : read_train_config_json(tr_config);
    config.seed = seed;
    PipelineResult result = run_pipeline(loaded.features, config);

    fs::create_directories(tr_out);
    save_net_json(result.ae_net, seed, config.ae.summary(),
                  tr_out / "ae_model.json", config.ae.encoder_layer_count());
    save_net_json(result.mlp_net, seed, config.mlp.summary(),
                  tr_out / "mlp_model.json");
    write_embeddings_csv(result.embeddings, tr_out / "embeddings.csv");
    write_scores_csv(result.scores, tr_out / "scores.csv");
    write_roc_csv(result.roc, tr_out / "roc.csv");
    write_text(tr_out / "report.json",
               evaluation_report_json(result.roc, {result.fixed05,
                                                   result.best_accuracy,
                                                   result.best_f1}));
    write_vocabulary_json(loaded.vocab, loaded.features.binarized,
                          tr_out / "vocabulary.json");

    RunManifest rm = base_manifest("train", seed);
    rm.inputs = {{tr_features.string(), file_fingerprint(tr_features)}};
    if (!tr_config.empty()) {
      rm.inputs.emplace_back(tr_config.string(), file_fingerprint(tr_config));
    }
    rm.outputs = {"ae_model.json", "mlp_model.json", "embeddings.csv",
                  "scores.csv",    "roc.csv",        "report.json",
                  "vocabulary.json"};
    rm.config_summary = config.ae.summary() + " | " + config.mlp.summary();
    rm.total_seconds = seconds_since(t0);
    write_run_manifest(rm, tr_out);

    std::cout << "auc=" << fixed6(result.roc.auc)
              << " acc@0.5=" << fixed6(result.fixed05.accuracy)
              << " fpr@0.5=" << fixed6(result.fixed05.fpr)
              << " best_acc=" << fixed6(result.best_accuracy.accuracy)
              << " ae_val_loss=" << fixed6(result.ae_val_loss) << " -> "
              << tr_out.string() << "\n";
  });

  // --- sweep ------------------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "run every configuration in a plan file and tabulate metrics");
  fs::path sw_plan, sw_features, sw_out;
  unsigned sw_workers = 1;
  std::size_t sw_cap = 0;
  bool sw_no_artifacts = false;
  cmd_sweep->add_option("--plan", sw_plan, "sweep plan JSON")->required();
  cmd_sweep->add_option("--features", sw_features, "features.csv from extract")
      ->required();
  cmd_sweep->add_option("--out", sw_out, "output directory")->required();
  cmd_sweep->add_option("--workers", sw_workers, "parallel pipeline runs")
      ->capture_default_str();
  cmd_sweep->add_option("--epochs-cap", sw_cap,
                        "clamp every row's epochs (0 = plan values)")
      ->capture_default_str();
  cmd_sweep->add_flag("--no-artifacts", sw_no_artifacts,
                      "skip per-row artifact directories");
  cmd_sweep->callback([&] {
    apply_backend();
    auto t0 = Clock::now();
    SweepPlan plan = read_sweep_plan_json(sw_plan);
    LoadedFeatures loaded = read_features_csv(sw_features);
    SweepOptions options;
    options.seed = seed;
    options.workers = sw_workers;
    options.epochs_cap = sw_cap;
    fs::create_directories(sw_out);
    if (!sw_no_artifacts) {
      options.artifacts_dir = sw_out / "runs";
    }
    std::vector<SweepRow> rows = run_sweep(plan, loaded.features, options);
    write_sweep_csv(rows, sw_out / "sweep.csv");

    std::size_t failed = 0;
    for (const auto& row : rows) {
      if (!row.ok) {
        ++failed;
        std::cerr << "conf " << row.conf_id << " failed: " << row.error << "\n";
      }
    }
    RunManifest rm = base_manifest("sweep", seed);
    rm.inputs = {{sw_plan.string(), file_fingerprint(sw_plan)},
                 {sw_features.string(), file_fingerprint(sw_features)}};
    rm.outputs = {"sweep.csv"};
    if (!sw_no_artifacts) {
      rm.outputs.push_back("runs/");
    }
    rm.config_summary = plan.name + " (" + std::to_string(rows.size()) +
                        " configurations)";
    rm.total_seconds = seconds_since(t0);
    write_run_manifest(rm, sw_out);

    std::cout << "swept " << rows.size() << " configurations";
    if (failed > 0) {
      std::cout << " (" << failed << " failed)";
    }
    std::cout << " -> " << (sw_out / "sweep.csv").string() << "\n";
  });

  // --- predict ----------------------------------------------------------------
  auto* cmd_predict = app.add_subcommand(
      "predict", "score new manifests with a trained model directory");
  fs::path pr_model, pr_manifests, pr_labels, pr_out;
  cmd_predict->add_option("--model-dir", pr_model,
                          "directory holding ae_model.json, mlp_model.json, vocabulary.json")
      ->required();
  cmd_predict->add_option("--manifests", pr_manifests, "directory of <app_id>.xml files")
      ->required();
  cmd_predict->add_option("--labels", pr_labels,
                          "optional CSV: app_id,label joined into the output");
  cmd_predict->add_option("--out", pr_out, "output directory")->required();
  cmd_predict->callback([&] {
    apply_backend();
    auto t0 = Clock::now();
    LoadedNet ae = load_net_json(pr_model / "ae_model.json");
    LoadedNet mlp = load_net_json(pr_model / "mlp_model.json");
    LoadedVocabulary vocab = read_vocabulary_json(pr_model / "vocabulary.json");
    if (ae.encoder_layer_count == 0 || ae.encoder_layer_count >= ae.net.size()) {
      throw Error(Errc::InvalidConfig,
                  "ae_model.json lacks a usable encoder layer count");
    }
    std::map<std::string, Label> label_map;
    if (!pr_labels.empty()) {
      label_map = read_label_map(pr_labels);
    }
    Corpus corpus = load_manifest_dir(pr_manifests, label_map);
    fs::create_directories(pr_out);

    RunManifest rm = base_manifest("predict", seed);
    rm.inputs = {
        {(pr_model / "ae_model.json").string(), file_fingerprint(pr_model / "ae_model.json")},
        {(pr_model / "mlp_model.json").string(), file_fingerprint(pr_model / "mlp_model.json")},
        {(pr_model / "vocabulary.json").string(), file_fingerprint(pr_model / "vocabulary.json")},
        {pr_manifests.string(), corpus_fingerprint(corpus)}};
    rm.outputs = {"scores.csv"};
    rm.config_summary = ae.config_summary + " | " + mlp.config_summary;

    if (corpus.samples.empty()) {
      write_text(pr_out / "scores.csv", "app_id,score,label\n");
      rm.total_seconds = seconds_since(t0);
      write_run_manifest(rm, pr_out);
      std::cout << "scored 0 apps -> " << (pr_out / "scores.csv").string() << "\n";
      return;
    }
    FeatureMatrix features = vectorize(corpus, vocab.vocab, vocab.binarized);
    EmbeddingMatrix embeddings =
        encode(ae.net, ae.encoder_layer_count, features, ae.config_summary);
    ScoreVector scores = predict(mlp.net, embeddings, features.labels);
    write_scores_csv(scores, pr_out / "scores.csv");
    rm.total_seconds = seconds_since(t0);
    write_run_manifest(rm, pr_out);
    std::cout << "scored " << scores.app_ids.size() << " apps -> "
              << (pr_out / "scores.csv").string() << "\n";
  });

  // --- synth ------------------------------------------------------------------
  auto* cmd_synth = app.add_subcommand(
      "synth", "generate a synthetic labeled manifest corpus");
  fs::path sy_spec, sy_out;
  std::size_t sy_mal = 200, sy_ben = 200, sy_vocab = 32, sy_contrast = 8;
  double sy_p_hi = 0.85, sy_p_lo = 0.05, sy_p_bg = 0.25;
  std::uint32_t sy_repeat = 1;
  cmd_synth->add_option("--spec", sy_spec, "generator spec JSON (overrides the knobs below)");
  cmd_synth->add_option("--out", sy_out, "output directory")->required();
  cmd_synth->add_option("--malicious", sy_mal, "malicious app count")->capture_default_str();
  cmd_synth->add_option("--benign", sy_ben, "benign app count")->capture_default_str();
  cmd_synth->add_option("--vocab-size", sy_vocab, "vocabulary size")->capture_default_str();
  cmd_synth->add_option("--contrast-keys", sy_contrast,
                        "leading keys with contrasting class probabilities")
      ->capture_default_str();
  cmd_synth->add_option("--p-hi", sy_p_hi, "contrast-key malicious probability")
      ->capture_default_str();
  cmd_synth->add_option("--p-lo", sy_p_lo, "contrast-key benign probability")
      ->capture_default_str();
  cmd_synth->add_option("--p-background", sy_p_bg,
                        "shared probability for the remaining keys")
      ->capture_default_str();
  cmd_synth->add_option("--repeat-max", sy_repeat,
                        "max occurrences of a drawn key per app")
      ->capture_default_str();
  cmd_synth->callback([&] {
    apply_backend();
    auto t0 = Clock::now();
    GeneratorSpec spec;
    if (!sy_spec.empty()) {
      spec = read_generator_spec_json(sy_spec);
      if (seed_opt->count() > 0) {
        spec.seed = seed;
      }
    } else {
      spec = GeneratorSpec::contrast(sy_mal, sy_ben, sy_vocab, sy_contrast,
                                     sy_p_hi, sy_p_lo, sy_p_bg, seed);
      spec.repeat_max = sy_repeat;
    }
    GeneratedCorpus corpus = generate_corpus(spec, sy_out);
    write_generator_spec_json(spec, sy_out / "spec.json");

    RunManifest rm = base_manifest("synth", spec.seed);
    if (!sy_spec.empty()) {
      rm.inputs = {{sy_spec.string(), file_fingerprint(sy_spec)}};
    }
    rm.outputs = {"manifests/", "labels.csv", "ground_truth.json", "spec.json"};
    rm.config_summary = std::to_string(spec.n_malicious) + " malicious + " +
                        std::to_string(spec.n_benign) + " benign over " +
                        std::to_string(spec.keys.size()) + " keys";
    rm.total_seconds = seconds_since(t0);
    write_run_manifest(rm, sy_out);
    std::cout << "generated " << corpus.app_ids.size() << " manifests -> "
              << sy_out.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    if (json_errors) {
      nlohmann::json j{{"error", errc_name(e.code())}, {"message", e.what()}};
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    if (json_errors) {
      nlohmann::json j{{"error", "unhandled"}, {"message", e.what()}};
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  }
  return 0;
}
