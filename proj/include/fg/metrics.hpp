#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fg/kernels.hpp"
#include "fg/raster.hpp"

namespace fg {

/// Class 1 (deforested) is the positive class.
using ConfusionCounts = kernels::Counts;

/// Throws Errc::DimensionMismatch.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);
ConfusionCounts operator+(const ConfusionCounts& a, const ConfusionCounts& b);

// Each throws Errc::EmptyInput on zero pixels. With no positives in either
// mask, f1 and iou are 1.
double pixel_accuracy(const ConfusionCounts& c);
double f1(const ConfusionCounts& c);
double iou(const ConfusionCounts& c);

struct LossParams {
  double bce_epsilon = 1e-7;
  double dice_smooth = 1.0;
  double bce_weight = 1.0;
  double dice_weight = 1.0;
};

double bce_loss(const ProbabilityMask& p, const BinaryMask& y, const LossParams& params = {});
double dice_loss(const ProbabilityMask& p, const BinaryMask& y, const LossParams& params = {});
/// bce_weight * bce + dice_weight * dice.
double combined_loss(const ProbabilityMask& p, const BinaryMask& y, const LossParams& params = {});

struct QueryScore {
  std::string query;  // e.g. "-54.80,-3.67,2020,08"
  ConfusionCounts counts;
};

struct Scores {
  double accuracy = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
};

struct EvalReport {
  std::vector<QueryScore> queries;
  ConfusionCounts pooled;
  Scores micro;  // from pooled counts
  Scores macro;  // mean of per-query scores
};

/// Pools counts in the order given; queries are expected sorted.
EvalReport make_eval_report(std::vector<QueryScore> queries);
std::string eval_report_to_json(const EvalReport& report);

}  // namespace fg
