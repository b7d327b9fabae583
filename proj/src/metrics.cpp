#include "intentnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "intentnet/errors.hpp"

namespace intentnet {

const char* threshold_policy_name(ThresholdPolicy p) {
  switch (p) {
    case ThresholdPolicy::Fixed05:
      return "fixed_0.5";
    case ThresholdPolicy::BestAccuracy:
      return "best_accuracy";
    case ThresholdPolicy::BestF1:
      return "best_f1";
  }
  return "?";
}

namespace {

struct ClassTotals {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassTotals check_inputs(const std::vector<double>& scores,
                         const std::vector<Label>& labels,
                         bool need_both_classes) {
  if (scores.size() != labels.size()) {
    throw Error(Errc::ShapeMismatch, "scores vs labels length");
  }
  ClassTotals totals;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error(Errc::InvalidConfig, "non-finite score");
    }
    if (labels[i] == Label::Malicious) {
      ++totals.positives;
    } else if (labels[i] == Label::Benign) {
      ++totals.negatives;
    } else {
      throw Error(Errc::InvalidConfig, "unlabeled row in evaluation");
    }
  }
  if (need_both_classes && (totals.positives == 0 || totals.negatives == 0)) {
    throw Error(Errc::SingleClass,
                totals.positives == 0 ? "no positive rows" : "no negative rows");
  }
  return totals;
}

}  // namespace

RocCurve roc_auc(const std::vector<double>& scores,
                 const std::vector<Label>& labels) {
  const ClassTotals totals = check_inputs(scores, labels, true);
  const double p = static_cast<double>(totals.positives);
  const double n = static_cast<double>(totals.negatives);

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Mann-Whitney via tie-averaged ranks. Ranks are integers or half
  // integers, all exactly representable, so this matches literal pair
  // counting bit for bit.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      ++j;
    }
    // 1-based ranks i+1 .. j share the average (i + 1 + j) / 2.
    const double avg_rank = (static_cast<double>(i + 1 + j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == Label::Malicious) {
        positive_rank_sum += avg_rank;
      }
    }
    i = j;
  }

  RocCurve curve;
  curve.auc = (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);

  // Curve points: anchor above every score, then one point per distinct
  // score descending; the final point is necessarily (1, 1).
  curve.points.push_back(RocPoint{1.0, 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = order.size(); i-- > 0;) {
    const std::size_t idx = order[i];
    if (labels[idx] == Label::Malicious) {
      ++tp;
    } else {
      ++fp;
    }
    const bool last_of_group = i == 0 || scores[order[i - 1]] != scores[idx];
    if (last_of_group) {
      curve.points.push_back(RocPoint{scores[idx],
                                      static_cast<double>(fp) / n,
                                      static_cast<double>(tp) / p});
    }
  }
  return curve;
}

ConfusionMetrics metrics_at_threshold(const std::vector<double>& scores,
                                      const std::vector<Label>& labels,
                                      double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::InvalidConfig, "threshold must lie in [0, 1]");
  }
  const ClassTotals totals = check_inputs(scores, labels, false);
  if (totals.negatives == 0) {
    throw Error(Errc::SingleClass, "FPR undefined without negative rows");
  }
  if (scores.empty()) {
    throw Error(Errc::InvalidConfig, "no rows to evaluate");
  }

  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted_positive = scores[i] >= threshold;
    const bool actual_positive = labels[i] == Label::Malicious;
    if (predicted_positive && actual_positive) {
      ++tp;
    } else if (predicted_positive) {
      ++fp;
    } else if (actual_positive) {
      ++fn;
    } else {
      ++tn;
    }
  }

  ConfusionMetrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
  m.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
  m.precision = tp + fp == 0
                    ? 0.0
                    : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0
                 ? 0.0
                 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

ThresholdReport select_threshold(const std::vector<double>& scores,
                                 const std::vector<Label>& labels,
                                 ThresholdPolicy policy) {
  check_inputs(scores, labels, true);

  ThresholdReport report;
  report.policy = policy;

  if (policy == ThresholdPolicy::Fixed05) {
    report.threshold = 0.5;
  } else {
    std::vector<double> distinct = scores;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());

    std::vector<double> candidates;
    candidates.push_back(0.0);
    for (std::size_t i = 1; i < distinct.size(); ++i) {
      const double mid = (distinct[i - 1] + distinct[i]) / 2.0;
      if (mid >= 0.0 && mid <= 1.0) {
        candidates.push_back(mid);
      }
    }
    candidates.push_back(1.0);

    double best_value = -1.0;
    double best_threshold = 0.0;
    for (const double t : candidates) {
      const ConfusionMetrics m = metrics_at_threshold(scores, labels, t);
      const double value =
          policy == ThresholdPolicy::BestAccuracy ? m.accuracy : m.f1;
      // >= prefers the larger threshold on ties (candidates ascend).
      if (value >= best_value) {
        best_value = value;
        best_threshold = t;
      }
    }
    report.threshold = best_threshold;
  }

  const ConfusionMetrics m =
      metrics_at_threshold(scores, labels, report.threshold);
  report.accuracy = m.accuracy;
  report.fpr = m.fpr;
  report.f1 = m.f1;
  return report;
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << "threshold,fpr,tpr\n";
  char buf[64];
  for (const RocPoint& point : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", point.threshold,
                  point.fpr, point.tpr);
    out << buf << '\n';
  }
  if (!out) {
    throw Error(Errc::IoFailure, "write failed: " + path.string());
  }
}

std::string evaluation_report_json(
    const RocCurve& curve, const std::vector<ThresholdReport>& reports) {
  // Hand-rolled so every numeric field is fixed 6-decimal and diffs stay
  // meaningful.
  char buf[64];
  std::ostringstream out;
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  out << "{\n  \"auc\": " << num(curve.auc) << ",\n  \"policies\": [\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ThresholdReport& r = reports[i];
    out << "    {\"policy\": \"" << threshold_policy_name(r.policy)
        << "\", \"threshold\": " << num(r.threshold)
        << ", \"accuracy\": " << num(r.accuracy)
        << ", \"fpr\": " << num(r.fpr) << ", \"f1\": " << num(r.f1) << "}"
        << (i + 1 < reports.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

}  // namespace intentnet
