// Acceptance gate: end-to-end checks of the toolkit's documented guarantees.
// Prints one PASS/FAIL line per criterion and exits nonzero if any failed.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "intentnet/autoencoder.hpp"
#include "intentnet/classifier.hpp"
#include "intentnet/errors.hpp"
#include "intentnet/features.hpp"
#include "intentnet/manifest.hpp"
#include "intentnet/matrix.hpp"
#include "intentnet/metrics.hpp"
#include "intentnet/nn.hpp"
#include "intentnet/pipeline.hpp"
#include "intentnet/rng.hpp"
#include "intentnet/stats.hpp"
#include "intentnet/sweep.hpp"
#include "intentnet/synth.hpp"

#include "manifest_fixtures.hpp"

using namespace intentnet;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
  void note(const std::string& message) {
    if (ok) {
      detail = message;
    }
  }
};

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() /
                   ("intentnet_acceptance_" + std::to_string(::getpid())) /
                   name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: analytic gradients against central finite differences.

double loss_at(const Net& net, const Matrix& x, const Matrix& target,
               LossKind loss) {
  return compute_loss(loss, forward(net, x).output(), target);
}

double fd_grad(Net& net, double* param, const Matrix& x, const Matrix& target,
               LossKind loss, double h) {
  const double saved = *param;
  *param = saved + h;
  const double up = loss_at(net, x, target, loss);
  *param = saved - h;
  const double down = loss_at(net, x, target, loss);
  *param = saved;
  return (up - down) / (2.0 * h);
}

struct FdCase {
  Net net;
  Matrix x{0, 0};
  Matrix target{0, 0};
  LossKind loss = LossKind::MSE;
};

// Draws a random small net and rejects configurations where the loss is not
// differentiable within the finite-difference window: pre-activations near
// the ReLU kink, or predictions near the cross-entropy clamp boundaries.
bool draw_fd_case(Activation out_act, LossKind loss, std::uint64_t seed,
                  int depth, FdCase& out) {
  const Activation hidden_pool[] = {Activation::ReLU, Activation::Sigmoid,
                                    Activation::Linear};
  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    Rng rng(splitmix64(seed * 977 + attempt));
    FdCase c;
    c.loss = loss;
    const std::size_t in_dim = 2 + rng.below(3);
    std::size_t dim = in_dim;
    for (int d = 0; d < depth; ++d) {
      const std::size_t width = 2 + rng.below(3);
      const Activation act =
          d + 1 == depth ? out_act : hidden_pool[rng.below(3)];
      c.net.push_back(make_dense(dim, width, act, rng));
      dim = width;
    }
    if (loss == LossKind::BinaryCrossEntropy &&
        out_act == Activation::Linear) {
      for (double& w : c.net.back().weights.data) {
        w *= 0.2;
      }
      for (double& b : c.net.back().bias) {
        b = 0.5;
      }
    }
    const std::size_t rows = 3;
    c.x = Matrix(rows, in_dim);
    for (double& v : c.x.data) {
      v = rng.uniform(-1.0, 1.0);
    }
    c.target = Matrix(rows, dim);
    for (double& v : c.target.data) {
      v = loss == LossKind::MSE ? rng.uniform(-1.0, 1.0)
                                : rng.uniform(0.05, 0.95);
    }

    const ForwardTrace trace = forward(c.net, c.x);
    bool safe = true;
    for (std::size_t li = 0; li < c.net.size() && safe; ++li) {
      if (c.net[li].activation != Activation::ReLU) {
        continue;
      }
      for (double z : trace.pre[li].data) {
        if (std::abs(z) < 1e-3) {
          safe = false;
          break;
        }
      }
    }
    if (safe && loss == LossKind::BinaryCrossEntropy) {
      for (double y : trace.output().data) {
        const bool near_clamp =
            std::abs(y - 1e-7) < 1e-3 || std::abs(y - (1.0 - 1e-7)) < 1e-3;
        if (near_clamp && y != 0.0) {
          safe = false;
          break;
        }
      }
    }
    if (safe) {
      out = std::move(c);
      return true;
    }
  }
  return false;
}

double max_grad_error(FdCase& c) {
  const ForwardTrace trace = forward(c.net, c.x);
  const Gradients grads = backward(c.net, c.x, trace, c.target, c.loss);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t li = 0; li < c.net.size(); ++li) {
    for (std::size_t i = 0; i < c.net[li].weights.data.size(); ++i) {
      const double ga = grads.weights[li].data[i];
      const double gn =
          fd_grad(c.net, &c.net[li].weights.data[i], c.x, c.target, c.loss, h);
      worst = std::max(worst, std::abs(ga - gn) /
                                  std::max({1e-6, std::abs(ga), std::abs(gn)}));
    }
    for (std::size_t i = 0; i < c.net[li].bias.size(); ++i) {
      const double ga = grads.bias[li][i];
      const double gn =
          fd_grad(c.net, &c.net[li].bias[i], c.x, c.target, c.loss, h);
      worst = std::max(worst, std::abs(ga - gn) /
                                  std::max({1e-6, std::abs(ga), std::abs(gn)}));
    }
  }
  return worst;
}

Check criterion_gradients() {
  Check check;
  const auto t0 = Clock::now();
  const LossKind losses[] = {LossKind::MSE, LossKind::BinaryCrossEntropy};
  const Activation out_acts[] = {Activation::Linear, Activation::Sigmoid,
                                 Activation::ReLU};
  const int depths[] = {1, 2, 3, 2, 3};
  int nets = 0;
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (LossKind loss : losses) {
    for (Activation out_act : out_acts) {
      for (int depth : depths) {
        FdCase c;
        check.require(draw_fd_case(out_act, loss, seed++, depth, c),
                      "no differentiable configuration found");
        if (!check.ok) {
          return check;
        }
        worst = std::max(worst, max_grad_error(c));
        ++nets;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  check.require(nets >= 20, format("only %d nets drawn", nets));
  check.require(worst < 1e-4,
                format("max relative gradient error %.3g >= 1e-4", worst));
  check.require(elapsed < 10.0, format("took %.1f s >= 10 s", elapsed));
  check.note(format("%d nets, every activation x loss pair, worst error "
                    "%.2e, %.2f s",
                    nets, worst, elapsed));
  return check;
}

// ---------------------------------------------------------------------------
// Criterion 2: rank-method AUC against exhaustive pair counting.

double pair_count_auc(const std::vector<double>& scores,
                      const std::vector<Label>& labels) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != Label::Malicious) {
      continue;
    }
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != Label::Benign) {
        continue;
      }
      ++pairs;
      if (scores[i] > scores[j]) {
        sum += 1.0;
      } else if (scores[i] == scores[j]) {
        sum += 0.5;
      }
    }
  }
  return sum / static_cast<double>(pairs);
}

double trapezoid_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (b.tpr + a.tpr) / 2.0;
  }
  return area;
}

Check criterion_auc_oracle() {
  Check check;
  Rng rng(4242);
  double worst_trapezoid = 0.0;
  for (int round = 0; round < 200 && check.ok; ++round) {
    std::vector<double> scores;
    std::vector<Label> labels;
    const std::size_t n = 2 + rng.below(49);  // 2 .. 50
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(round % 2 == 0
                           ? static_cast<double>(rng.below(11)) / 10.0
                           : rng.uniform());
      labels.push_back(rng.bernoulli(0.5) ? Label::Malicious : Label::Benign);
    }
    labels[0] = Label::Malicious;  // guarantee both classes
    labels[1] = Label::Benign;

    const RocCurve curve = roc_auc(scores, labels);
    const double oracle = pair_count_auc(scores, labels);
    check.require(curve.auc == oracle,
                  format("round %d: auc %.17g != pair statistic %.17g", round,
                         curve.auc, oracle));
    const double gap = std::abs(curve.auc - trapezoid_area(curve));
    worst_trapezoid = std::max(worst_trapezoid, gap);
    check.require(gap <= 1e-12,
                  format("round %d: trapezoid gap %.3g > 1e-12", round, gap));
  }
  check.note(format("200 fixtures exact, worst trapezoid gap %.2e",
                    worst_trapezoid));
  return check;
}

// ---------------------------------------------------------------------------
// Criterion 3: normalized class-contrast scores and competition ranking.

Check criterion_contrast() {
  Check check;
  for (std::uint64_t a : {1ull, 2ull, 17ull, 400ull, 123456789ull}) {
    check.require(normalized_difference(a, 0) == 2.0,
                  format("d(%llu, 0) != +2", (unsigned long long)a));
    check.require(normalized_difference(0, a) == -2.0,
                  format("d(0, %llu) != -2", (unsigned long long)a));
  }

  Rng rng(77);
  for (int i = 0; i < 1000 && check.ok; ++i) {
    const std::uint64_t a = rng.below(10000);
    const std::uint64_t b = rng.below(10000);
    if (a == 0 && b == 0) {
      continue;
    }
    check.require(normalized_difference(a, b) == -normalized_difference(b, a),
                  format("antisymmetry broken at a=%llu b=%llu",
                         (unsigned long long)a, (unsigned long long)b));
  }

  // Five keys present only in the malicious class share the maximal score
  // +2 and must all carry competition rank 1; the next distinct score gets
  // rank 6.
  std::vector<IntentStats> stats;
  auto add = [&stats](const char* name, std::uint64_t mal, std::uint64_t ben) {
    IntentStats s;
    s.key = IntentKey{IntentKind::Action, name, name};
    s.count_mal = mal;
    s.count_ben = ben;
    stats.push_back(s);
  };
  add("BOOT_COMPLETED", 438, 0);
  add("SMS_RECEIVED", 339, 0);
  add("PACKAGE_ADDED", 201, 0);
  add("NEW_OUTGOING_CALL", 75, 0);
  add("USER_PRESENT", 14, 0);
  add("MAIN", 400, 380);
  add("VIEW", 120, 350);
  add("SEND", 3, 90);
  fill_normalized(stats);
  const std::vector<RankedStat> ranked = top_k(stats, RankBy::NormDiffMal, 0);
  check.require(ranked.size() == stats.size(), "ranking dropped rows");
  std::size_t rank_one = 0;
  for (const RankedStat& row : ranked) {
    rank_one += row.rank == 1 ? 1 : 0;
  }
  check.require(rank_one == 5,
                format("%zu rows at rank 1, expected 5", rank_one));
  for (std::size_t i = 0; i < 5 && check.ok; ++i) {
    check.require(ranked[i].stats.norm_diff_mal == 2.0 && ranked[i].rank == 1,
                  format("row %zu: score %.17g rank %zu", i,
                         ranked[i].stats.norm_diff_mal, ranked[i].rank));
  }
  check.require(ranked.size() > 5 && ranked[5].rank == 6,
                "next distinct score does not take rank 6");
  check.note("exact +/-2 endpoints, 1000 antisymmetric pairs, "
             "five shared rank-1 entries then rank 6");
  return check;
}

// ---------------------------------------------------------------------------
// Criterion 4: optimizer first steps against hand-derived closed forms.

Check criterion_optimizers() {
  Check check;
  auto one_param_net = [] {
    Net net(1);
    net[0].in_dim = 1;
    net[0].out_dim = 1;
    net[0].activation = Activation::Linear;
    net[0].weights = Matrix(1, 1);
    net[0].bias = {0.0};
    return net;
  };
  Gradients unit;
  unit.weights.push_back(Matrix(1, 1));
  unit.weights[0].data[0] = 1.0;
  unit.bias.push_back({0.0});

  {
    Net net = one_param_net();
    Optimizer opt(OptimizerConfig::defaults(OptimizerKind::RMSProp), net);
    opt.step(net, unit);
    // acc = 0.1 * 1^2; dw = -0.001 / (sqrt(0.1) + 1e-8) = -0.0031623...
    const double expected = -0.001 / (std::sqrt(0.1) + 1e-8);
    check.require(std::abs(net[0].weights.data[0] - expected) < 1e-10,
                  format("rmsprop step %.17g != %.17g",
                         net[0].weights.data[0], expected));
    check.require(std::abs(expected - -0.0031623) < 1e-7,
                  "rmsprop closed form drifted from -0.0031623");
  }
  {
    Net net = one_param_net();
    Optimizer opt(OptimizerConfig::defaults(OptimizerKind::Adam), net);
    opt.step(net, unit);
    // m = 0.1, v = 0.001; mhat = 1, vhat = 1; dw = -0.001 / (1 + 1e-8).
    const double mhat = 0.1 / (1.0 - 0.9);
    const double vhat = 0.001 / (1.0 - 0.999);
    const double expected = -0.001 * mhat / (std::sqrt(vhat) + 1e-8);
    check.require(std::abs(net[0].weights.data[0] - expected) < 1e-10,
                  format("adam step %.17g != %.17g", net[0].weights.data[0],
                         expected));
  }
  {
    Net net = one_param_net();
    Optimizer opt(OptimizerConfig::defaults(OptimizerKind::Adadelta), net);
    opt.step(net, unit);
    // ag = 0.05; dw = -sqrt(1e-6) / sqrt(0.05 + 1e-6).
    const double expected = -std::sqrt(1e-6) / std::sqrt(0.05 + 1e-6);
    check.require(std::abs(net[0].weights.data[0] - expected) < 1e-10,
                  format("adadelta step %.17g != %.17g",
                         net[0].weights.data[0], expected));
  }
  check.note("rmsprop, adam, adadelta first steps within 1e-10 of the "
             "closed forms");
  return check;
}

// ---------------------------------------------------------------------------
// Criteria 5 and 6: the end-to-end synthetic benchmark and its determinism.

struct BenchmarkRun {
  PipelineResult result;
  std::string ae_json;
  std::string mlp_json;
  std::string report_json;
  std::size_t vocab_size = 0;
};

BenchmarkRun run_benchmark(const fs::path& dir) {
  GeneratorSpec spec =
      GeneratorSpec::contrast(200, 200, 32, 8, 0.85, 0.05, 0.25, 20260815);
  generate_corpus(spec, dir);
  const Corpus corpus = load_corpus(dir / "manifests", dir / "labels.csv", 1);
  const Vocabulary vocab = build_vocabulary(corpus);
  FeatureMatrix features = vectorize(corpus, vocab, true);
  split_train_validation(features, 0.7, spec.seed);

  PipelineConfig config;
  config.ae.hidden = {16, 8};
  config.ae.embedding_dim = 4;
  config.ae.epochs = 200;
  config.ae.batch_size = 32;
  config.ae.optimizer = OptimizerConfig::defaults(OptimizerKind::RMSProp);
  config.mlp.hidden = {16, 16, 16, 16};
  config.mlp.epochs = 200;
  config.mlp.batch_size = 32;
  config.mlp.optimizer = OptimizerConfig::defaults(OptimizerKind::RMSProp);
  config.seed = spec.seed;

  BenchmarkRun run;
  run.vocab_size = vocab.size();
  run.result = run_pipeline(features, config);
  run.ae_json = net_to_json(run.result.ae_net, config.seed,
                            config.ae.summary(),
                            config.ae.encoder_layer_count());
  run.mlp_json =
      net_to_json(run.result.mlp_net, config.seed, config.mlp.summary());
  run.report_json = evaluation_report_json(
      run.result.roc, {run.result.fixed05, run.result.best_accuracy,
                       run.result.best_f1});
  return run;
}

Check criterion_benchmark(BenchmarkRun& out) {
  Check check;
  const auto t0 = Clock::now();
  out = run_benchmark(scratch_dir("benchmark"));
  const double elapsed = seconds_since(t0);

  check.require(out.vocab_size == 32,
                format("vocabulary has %zu keys, expected 32",
                       out.vocab_size));
  check.require(out.result.roc.auc >= 0.95,
                format("validation AUC %.6f < 0.95", out.result.roc.auc));
  check.require(
      out.result.best_accuracy.accuracy >= out.result.fixed05.accuracy,
      format("best accuracy %.6f < fixed-0.5 accuracy %.6f",
             out.result.best_accuracy.accuracy, out.result.fixed05.accuracy));
  check.require(elapsed < 60.0, format("took %.1f s >= 60 s", elapsed));
  check.note(format("400 apps, 32 keys, 8 contrast keys (gap 0.80): AUC "
                    "%.4f, best acc %.4f >= acc@0.5 %.4f, %.1f s",
                    out.result.roc.auc, out.result.best_accuracy.accuracy,
                    out.result.fixed05.accuracy, elapsed));
  return check;
}

Check criterion_determinism(const BenchmarkRun& first) {
  Check check;
  const BenchmarkRun second = run_benchmark(scratch_dir("benchmark_replay"));
  check.require(second.ae_json == first.ae_json,
                "autoencoder model JSON differs between runs");
  check.require(second.mlp_json == first.mlp_json,
                "classifier model JSON differs between runs");
  check.require(second.report_json == first.report_json,
                "metric report differs between runs");
  check.note(format("model JSON (%zu + %zu bytes) and report (%zu bytes) "
                    "bitwise identical on rerun",
                    first.ae_json.size(), first.mlp_json.size(),
                    first.report_json.size()));
  return check;
}

// ---------------------------------------------------------------------------
// Criterion 7: the bundled benchmark plan's table structure.

Check criterion_table() {
  Check check;
  static_assert(steps_per_epoch(7700, 1024) == 8);
  check.require(steps_per_epoch(7700, 1024) == 8,
                "steps_per_epoch(7700, 1024) != 8");

  const SweepPlan plan =
      read_sweep_plan_json(fs::path(INTENTNET_PLANS_DIR) /
                           "full_benchmark.json");
  const std::vector<SweepPlan::Job> jobs = plan.jobs();
  check.require(jobs.size() == 42,
                format("plan yields %zu configurations, expected 42",
                       jobs.size()));
  for (std::size_t i = 0; i < jobs.size() && check.ok; ++i) {
    check.require(jobs[i].conf_id == static_cast<int>(i) + 1,
                  format("conf ids not 1..42 at index %zu", i));
  }

  // The shipped default training config must agree with the built-in
  // defaults (it is configuration 40 of the plan).
  const PipelineConfig bundled = read_train_config_json(
      fs::path(INTENTNET_CONFIGS_DIR) / "default_train.json");
  const PipelineConfig builtin = default_pipeline_config();
  check.require(bundled.ae.summary() == builtin.ae.summary() &&
                    bundled.mlp.summary() == builtin.mlp.summary(),
                "bundled default_train.json differs from built-in defaults");

  // A corpus wide enough for the largest autoencoder (input >= 256 columns).
  const GeneratorSpec spec =
      GeneratorSpec::contrast(100, 100, 280, 24, 0.9, 0.1, 0.5, 7);
  const GeneratedCorpus drawn = draw_corpus(spec);
  FeatureMatrix features;
  features.app_ids = drawn.app_ids;
  features.labels = drawn.labels;
  features.values = drawn.emission;
  features.binarized = true;
  features.split.assign(features.rows(), Split::Train);
  split_train_validation(features, 0.7, 7);
  check.require(features.values.cols >= 256,
                format("corpus too narrow (%zu cols)", features.values.cols));

  SweepOptions options;
  options.seed = 7;
  options.workers = 1;
  options.epochs_cap = 2;  // structure is under test, not accuracy
  const std::vector<SweepRow> rows = run_sweep(plan, features, options);
  check.require(rows.size() == 42, format("%zu rows, expected 42",
                                          rows.size()));
  for (const SweepRow& row : rows) {
    check.require(row.ok, format("conf %d failed: %s", row.conf_id,
                                 row.error.c_str()));
  }

  const fs::path csv_path = scratch_dir("table") / "sweep.csv";
  write_sweep_csv(rows, csv_path);
  std::ifstream csv(csv_path);
  std::string header;
  std::getline(csv, header);
  check.require(
      header ==
          "conf_id,ae_hidden,ae_embedding,ae_optimizer,ae_epochs,ae_batch,"
          "mlp_hidden,mlp_optimizer,mlp_epochs,mlp_batch,ae_val_loss,auc,"
          "accuracy_th05,fpr_th05,best_accuracy,fpr_at_best_accuracy,"
          "accuracy_at_best_f1,fpr_at_best_f1,wall_time_s,status",
      "header columns changed: " + header);
  std::size_t data_rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    ++data_rows;
    std::size_t cells = 1;
    bool quoted = false;
    for (char ch : line) {
      quoted = ch == '"' ? !quoted : quoted;
      cells += (ch == ',' && !quoted) ? 1 : 0;
    }
    check.require(cells == 20, format("row has %zu cells: %s", cells,
                                      line.c_str()));
  }
  check.require(data_rows == 42,
                format("table has %zu data rows, expected 42", data_rows));
  check.note("42-row plan, conf ids 1..42, 20-column table, "
             "steps_per_epoch(7700, 1024) == 8");
  return check;
}

// ---------------------------------------------------------------------------
// Criterion 8: manifest parser against the substring-scan oracle.

Check criterion_parser() {
  Check check;
  const auto& corpus = fixtures::manifest_corpus();
  check.require(corpus.size() == 25,
                format("%zu fixtures, expected 25", corpus.size()));
  for (const auto& fixture : corpus) {
    const IntentCounts parsed = parse_manifest(fixture.xml);
    const IntentCounts expected = fixtures::scan_oracle(fixture.xml);
    if (parsed != expected) {
      check.require(false, format("fixture '%s': extracted multiset differs",
                                  fixture.title));
      break;
    }
  }
  check.note("25 fixtures, extracted multisets match the scan oracle "
             "exactly");
  return check;
}

// ---------------------------------------------------------------------------
// Criterion 9: agreement of the three threshold policies on a fixture
// whose optimum sits exactly at 0.5.

Check criterion_thresholds() {
  Check check;
  const std::vector<double> scores = {0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
  const std::vector<Label> labels = {Label::Benign,    Label::Benign,
                                     Label::Benign,    Label::Benign,
                                     Label::Malicious, Label::Malicious,
                                     Label::Malicious, Label::Malicious};
  const ThresholdReport fixed = select_threshold(scores, labels,
                                                 ThresholdPolicy::Fixed05);
  const ThresholdReport acc = select_threshold(scores, labels,
                                               ThresholdPolicy::BestAccuracy);
  const ThresholdReport f1 = select_threshold(scores, labels,
                                              ThresholdPolicy::BestF1);
  for (const ThresholdReport* r : {&fixed, &acc, &f1}) {
    check.require(r->threshold == 0.5 && r->accuracy == 1.0 && r->fpr == 0.0,
                  format("%s: (%.17g, %.17g, %.17g) != (0.5, 1, 0)",
                         threshold_policy_name(r->policy), r->threshold,
                         r->accuracy, r->fpr));
  }
  check.require(fixed.threshold == acc.threshold &&
                    acc.threshold == f1.threshold &&
                    fixed.accuracy == acc.accuracy &&
                    acc.accuracy == f1.accuracy && fixed.fpr == acc.fpr &&
                    acc.fpr == f1.fpr,
                "policy triples are not identical");
  check.note("all three policies report (0.5, 1.0, 0.0)");
  return check;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };

  BenchmarkRun benchmark;
  const std::vector<Criterion> criteria = {
      {"gradient correctness", criterion_gradients},
      {"AUC oracle equivalence", criterion_auc_oracle},
      {"class-contrast score conformance", criterion_contrast},
      {"optimizer closed-form steps", criterion_optimizers},
      {"end-to-end synthetic benchmark",
       [&] { return criterion_benchmark(benchmark); }},
      {"bitwise determinism", [&] { return criterion_determinism(benchmark); }},
      {"benchmark table structure", criterion_table},
      {"manifest parser corpus", criterion_parser},
      {"threshold policy convergence", criterion_thresholds},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      check = criteria[i].run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %zu (%s): %s\n", check.ok ? "PASS" : "FAIL",
                i + 1, criteria[i].name, check.detail.c_str());
    std::fflush(stdout);
    failures += check.ok ? 0 : 1;
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures,
                criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
