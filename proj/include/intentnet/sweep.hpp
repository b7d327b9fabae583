#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intentnet/pipeline.hpp"

namespace intentnet {

// Grid-search harness: run the full pipeline once per configuration row and
// tabulate the metrics, mirroring a staged architecture search (vary the
// autoencoder against a standardized classifier head, then vary the
// classifier against the winning autoencoder, then training knobs).

enum class Pairing { Explicit, FixedMlpVaryAe, FixedAeVaryMlp };

struct SweepPlan {
  std::string name;
  int conf_id_start = 1;
  Pairing pairing = Pairing::Explicit;
  std::vector<AEConfig> ae_grid;
  std::vector<MLPConfig> mlp_grid;
  // Per-conf-id seed offsets (replay rows re-run an earlier configuration
  // under a shifted seed).
  std::map<int, std::uint64_t> seed_offsets;

  // Materialized rows: conf ids are conf_id_start, +1, ... (unique and
  // sequential by construction). Errors: InvalidConfig for empty grids or,
  // for Explicit pairing, grids of different lengths.
  struct Job {
    int conf_id = 0;
    AEConfig ae;
    MLPConfig mlp;
    std::uint64_t seed_offset = 0;
  };
  std::vector<Job> jobs() const;
};

struct SweepRow {
  int conf_id = 0;
  AEConfig ae;
  MLPConfig mlp;
  bool ok = false;
  std::string error;  // set when !ok

  double ae_val_loss = 0.0;
  double auc = 0.0;
  double accuracy_th05 = 0.0;
  double fpr_th05 = 0.0;
  double best_accuracy = 0.0;
  double fpr_at_best_accuracy = 0.0;
  double accuracy_at_best_f1 = 0.0;
  double fpr_at_best_f1 = 0.0;
  double wall_time_s = 0.0;
};

struct SweepOptions {
  std::uint64_t seed = 0;       // same base seed for every row
  unsigned workers = 1;
  std::size_t epochs_cap = 0;   // 0 = no cap; >0 clamps epochs for smoke runs
  // When set, per-row artifacts land in <artifacts_dir>/<conf_id>/.
  std::optional<std::filesystem::path> artifacts_dir;
};

// Runs every job (failures are captured per row, not thrown) and returns
// rows in conf-id order.
std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                const FeatureMatrix& features,
                                const SweepOptions& options);

// Keeps the rows whose metric is within `delta` of the best row; failed rows
// never survive. `higher_is_better` picks the direction (AUC vs. loss).
enum class StageMetric { Auc, AeValLoss, BestAccuracy };
std::vector<SweepRow> stage_filter(const std::vector<SweepRow>& rows,
                                   StageMetric metric, double delta);

SweepPlan read_sweep_plan_json(const std::filesystem::path& path);

// CSV, one line per row, conf-id order; metric cells are fixed 6-decimal and
// empty for failed rows.
void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path);

}  // namespace intentnet
