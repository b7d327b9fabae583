#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "intentnet/manifest.hpp"

namespace intentnet {

// A prediction is positive (malicious) when score >= threshold.

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;  // threshold descending, (0,0) .. (1,1)
  double auc = 0.0;
};

struct ConfusionMetrics {
  double accuracy = 0.0;
  double fpr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class ThresholdPolicy { Fixed05, BestAccuracy, BestF1 };

const char* threshold_policy_name(ThresholdPolicy p);

struct ThresholdReport {
  ThresholdPolicy policy = ThresholdPolicy::Fixed05;
  double threshold = 0.5;
  double accuracy = 0.0;
  double fpr = 0.0;
  double f1 = 0.0;
};

// ROC curve and AUC. The AUC is the Mann-Whitney pair statistic (ties
// between a positive and a negative score credit 0.5), computed by the exact
// rank method; the curve holds one point per distinct score plus the (0,0)
// anchor, and its trapezoidal area equals the pair statistic up to rounding.
// Errors: SingleClass unless both classes are present, InvalidConfig for
// non-finite scores, ShapeMismatch on length mismatch.
RocCurve roc_auc(const std::vector<double>& scores,
                 const std::vector<Label>& labels);

// Confusion metrics at one threshold. Degenerate ratios (no predicted
// positives, no actual positives) resolve to 0. Errors: SingleClass when
// there are no negative rows (FPR undefined), InvalidConfig for a threshold
// outside [0, 1].
ConfusionMetrics metrics_at_threshold(const std::vector<double>& scores,
                                      const std::vector<Label>& labels,
                                      double threshold);

// Threshold selection. Candidates are the midpoints of adjacent distinct
// sorted scores plus 0 and 1; Fixed05 always answers 0.5. Ties on the
// objective go to the larger threshold (fewer predicted positives, lower
// FPR). Errors: SingleClass unless both classes are present.
ThresholdReport select_threshold(const std::vector<double>& scores,
                                 const std::vector<Label>& labels,
                                 ThresholdPolicy policy);

// CSV: threshold,fpr,tpr at fixed 6 decimals, threshold descending.
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);

// JSON report: {"auc": ..., "policies": [fixed_0.5, best_accuracy, best_f1]}
// with numeric fields at fixed 6 decimals.
std::string evaluation_report_json(const RocCurve& curve,
                                   const std::vector<ThresholdReport>& reports);

}  // namespace intentnet
