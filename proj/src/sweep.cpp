#include "intentnet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "config_json.hpp"
#include "intentnet/errors.hpp"

namespace intentnet {

std::vector<SweepPlan::Job> SweepPlan::jobs() const {
  if (ae_grid.empty() || mlp_grid.empty()) {
    throw Error(Errc::InvalidConfig, "sweep plan needs both grids non-empty");
  }
  std::vector<Job> out;
  auto push = [&](const AEConfig& ae, const MLPConfig& mlp) {
    Job job;
    job.conf_id = conf_id_start + static_cast<int>(out.size());
    job.ae = ae;
    job.mlp = mlp;
    if (const auto it = seed_offsets.find(job.conf_id);
        it != seed_offsets.end()) {
      job.seed_offset = it->second;
    }
    out.push_back(std::move(job));
  };
  switch (pairing) {
    case Pairing::Explicit:
      if (ae_grid.size() != mlp_grid.size()) {
        throw Error(Errc::InvalidConfig,
                    "explicit pairing needs grids of equal length");
      }
      for (std::size_t i = 0; i < ae_grid.size(); ++i) {
        push(ae_grid[i], mlp_grid[i]);
      }
      break;
    case Pairing::FixedMlpVaryAe:
      for (const auto& ae : ae_grid) {
        push(ae, mlp_grid.front());
      }
      break;
    case Pairing::FixedAeVaryMlp:
      for (const auto& mlp : mlp_grid) {
        push(ae_grid.front(), mlp);
      }
      break;
  }
  return out;
}

namespace {

SweepRow run_job(const SweepPlan::Job& job, const FeatureMatrix& features,
                 const SweepOptions& options) {
  SweepRow row;
  row.conf_id = job.conf_id;
  row.ae = job.ae;
  row.mlp = job.mlp;

  PipelineConfig config;
  config.ae = job.ae;
  config.mlp = job.mlp;
  config.seed = options.seed + job.seed_offset;
  if (options.epochs_cap > 0) {
    config.ae.epochs = std::min(config.ae.epochs, options.epochs_cap);
    config.mlp.epochs = std::min(config.mlp.epochs, options.epochs_cap);
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    const PipelineResult result = run_pipeline(features, config);
    row.ae_val_loss = result.ae_val_loss;
    row.auc = result.roc.auc;
    row.accuracy_th05 = result.fixed05.accuracy;
    row.fpr_th05 = result.fixed05.fpr;
    row.best_accuracy = result.best_accuracy.accuracy;
    row.fpr_at_best_accuracy = result.best_accuracy.fpr;
    row.accuracy_at_best_f1 = result.best_f1.accuracy;
    row.fpr_at_best_f1 = result.best_f1.fpr;
    row.ok = true;

    if (options.artifacts_dir) {
      const auto dir = *options.artifacts_dir / std::to_string(job.conf_id);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) {
        throw Error(Errc::IoFailure, "cannot create " + dir.string());
      }
      save_net_json(result.ae_net, config.seed, config.ae.summary(),
                    dir / "ae_model.json", config.ae.encoder_layer_count());
      save_net_json(result.mlp_net, config.seed, config.mlp.summary(),
                    dir / "mlp_model.json");
      std::ofstream report(dir / "report.json", std::ios::binary);
      report << evaluation_report_json(
          result.roc, {result.fixed05, result.best_accuracy, result.best_f1});
    }
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.wall_time_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - started)
                        .count();
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                const FeatureMatrix& features,
                                const SweepOptions& options) {
  const std::vector<SweepPlan::Job> jobs = plan.jobs();
  std::vector<SweepRow> rows(jobs.size());

  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) {
        return;
      }
      rows[i] = run_job(jobs[i], features, options);
    }
  };

  if (options.workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(options.workers,
                                          static_cast<unsigned>(jobs.size()));
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back(run);
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return a.conf_id < b.conf_id;
            });
  return rows;
}

std::vector<SweepRow> stage_filter(const std::vector<SweepRow>& rows,
                                   StageMetric metric, double delta) {
  if (delta < 0.0) {
    throw Error(Errc::InvalidConfig, "delta must be >= 0");
  }
  auto value = [metric](const SweepRow& row) {
    switch (metric) {
      case StageMetric::Auc:
        return row.auc;
      case StageMetric::AeValLoss:
        return row.ae_val_loss;
      case StageMetric::BestAccuracy:
        return row.best_accuracy;
    }
    return 0.0;
  };
  const bool higher_is_better = metric != StageMetric::AeValLoss;

  bool any_ok = false;
  double best = 0.0;
  for (const auto& row : rows) {
    if (!row.ok) {
      continue;
    }
    const double v = value(row);
    if (!any_ok || (higher_is_better ? v > best : v < best)) {
      best = v;
      any_ok = true;
    }
  }
  std::vector<SweepRow> kept;
  if (!any_ok) {
    return kept;
  }
  for (const auto& row : rows) {
    if (!row.ok) {
      continue;
    }
    const double v = value(row);
    if (higher_is_better ? v >= best - delta : v <= best + delta) {
      kept.push_back(row);
    }
  }
  return kept;
}

SweepPlan read_sweep_plan_json(const std::filesystem::path& path) {
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

  SweepPlan plan;
  try {
    plan.name = doc.value("name", std::string("sweep"));
    plan.conf_id_start = doc.value("conf_id_start", 1);
    const std::string pairing = doc.value("pairing", std::string("explicit"));
    if (pairing == "explicit") {
      plan.pairing = Pairing::Explicit;
    } else if (pairing == "fixed_mlp_vary_ae") {
      plan.pairing = Pairing::FixedMlpVaryAe;
    } else if (pairing == "fixed_ae_vary_mlp") {
      plan.pairing = Pairing::FixedAeVaryMlp;
    } else {
      throw Error(Errc::InvalidConfig, "unknown pairing: " + pairing);
    }
    for (const auto& node : doc.at("ae_grid")) {
      plan.ae_grid.push_back(detail::parse_ae_config(node));
    }
    for (const auto& node : doc.at("mlp_grid")) {
      plan.mlp_grid.push_back(detail::parse_mlp_config(node));
    }
    if (doc.contains("seed_offsets")) {
      for (const auto& [key, value] : doc.at("seed_offsets").items()) {
        plan.seed_offsets[std::stoi(key)] = value.get<std::uint64_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig,
                "bad sweep plan " + path.string() + ": " + e.what());
  }
  plan.jobs();  // validate shape up front
  return plan;
}

namespace {

std::string widths_cell(const std::vector<std::size_t>& widths) {
  std::string out = "\"[";
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) {
      out += ", ";
    }
    out += std::to_string(widths[i]);
  }
  out += "]\"";
  return out;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << "conf_id,ae_hidden,ae_embedding,ae_optimizer,ae_epochs,ae_batch,"
         "mlp_hidden,mlp_optimizer,mlp_epochs,mlp_batch,"
         "ae_val_loss,auc,accuracy_th05,fpr_th05,"
         "best_accuracy,fpr_at_best_accuracy,"
         "accuracy_at_best_f1,fpr_at_best_f1,wall_time_s,status\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  for (const auto& row : rows) {
    out << row.conf_id << ',' << widths_cell(row.ae.hidden) << ','
        << row.ae.embedding_dim << ',' << optimizer_name(row.ae.optimizer.kind)
        << ',' << row.ae.epochs << ',' << row.ae.batch_size << ','
        << widths_cell(row.mlp.hidden) << ','
        << optimizer_name(row.mlp.optimizer.kind) << ',' << row.mlp.epochs
        << ',' << row.mlp.batch_size << ',';
    if (row.ok) {
      out << num(row.ae_val_loss) << ',' << num(row.auc) << ','
          << num(row.accuracy_th05) << ',' << num(row.fpr_th05) << ','
          << num(row.best_accuracy) << ',' << num(row.fpr_at_best_accuracy)
          << ',' << num(row.accuracy_at_best_f1) << ','
          << num(row.fpr_at_best_f1);
    } else {
      out << ",,,,,,,";
    }
    std::snprintf(buf, sizeof(buf), "%.3f", row.wall_time_s);
    out << ',' << buf << ',';
    if (row.ok) {
      out << "ok";
    } else {
      std::string msg = row.error;
      for (char& c : msg) {
        if (c == ',' || c == '\n' || c == '"') {
          c = ';';
        }
      }
      out << "error: " << msg;
    }
    out << '\n';
  }
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

}  // namespace intentnet
