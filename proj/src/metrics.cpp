#include "fg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fg/error.hpp"

namespace fg {

namespace {

void same_shape(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    throw Error(Errc::DimensionMismatch, std::string(what) + ": " + std::to_string(w1) + "x" + std::to_string(h1) +
                                             " vs " + std::to_string(w2) + "x" + std::to_string(h2));
  }
}

std::uint64_t total(const ConfusionCounts& c) { return c.tp + c.fp + c.fn + c.tn; }

Scores scores_of(const ConfusionCounts& c) { return {pixel_accuracy(c), f1(c), iou(c)}; }

}  // namespace

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
  same_shape(pred.width(), pred.height(), truth.width(), truth.height(), "confusion");
  return kernels::parallel::confusion(pred.values(), truth.values());
}

ConfusionCounts operator+(const ConfusionCounts& a, const ConfusionCounts& b) {
  return {a.tp + b.tp, a.fp + b.fp, a.fn + b.fn, a.tn + b.tn};
}

double pixel_accuracy(const ConfusionCounts& c) {
  if (total(c) == 0) throw Error(Errc::EmptyInput, "no pixels");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total(c));
}

double f1(const ConfusionCounts& c) {
  if (total(c) == 0) throw Error(Errc::EmptyInput, "no pixels");
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double iou(const ConfusionCounts& c) {
  if (total(c) == 0) throw Error(Errc::EmptyInput, "no pixels");
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double bce_loss(const ProbabilityMask& p, const BinaryMask& y, const LossParams& params) {
  same_shape(p.width(), p.height(), y.width(), y.height(), "bce_loss");
  if (p.size() == 0) throw Error(Errc::EmptyInput, "bce_loss on empty masks");
  const double eps = params.bce_epsilon;
  const auto pv = p.values();
  const auto yv = y.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double q = std::clamp(static_cast<double>(pv[i]), eps, 1.0 - eps);
    sum += yv[i] ? std::log(q) : std::log(1.0 - q);
  }
  return -sum / static_cast<double>(pv.size());
}

double dice_loss(const ProbabilityMask& p, const BinaryMask& y, const LossParams& params) {
  same_shape(p.width(), p.height(), y.width(), y.height(), "dice_loss");
  const auto pv = p.values();
  const auto yv = y.values();
  double inter = 0.0, sum_p = 0.0, sum_y = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    inter += pv[i] * static_cast<double>(yv[i]);
    sum_p += pv[i];
    sum_y += yv[i];
  }
  const double s = params.dice_smooth;
  return 1.0 - (2.0 * inter + s) / (sum_p + sum_y + s);
}

double combined_loss(const ProbabilityMask& p, const BinaryMask& y, const LossParams& params) {
  return params.bce_weight * bce_loss(p, y, params) + params.dice_weight * dice_loss(p, y, params);
}

EvalReport make_eval_report(std::vector<QueryScore> queries) {
  EvalReport r;
  r.queries = std::move(queries);
  if (r.queries.empty()) return r;
  Scores sum;
  for (const auto& q : r.queries) {
    r.pooled = r.pooled + q.counts;
    const Scores s = scores_of(q.counts);
    sum.accuracy += s.accuracy;
    sum.f1 += s.f1;
    sum.iou += s.iou;
  }
  r.micro = scores_of(r.pooled);
  const auto n = static_cast<double>(r.queries.size());
  r.macro = {sum.accuracy / n, sum.f1 / n, sum.iou / n};
  return r;
}

std::string eval_report_to_json(const EvalReport& report) {
  using nlohmann::json;
  json queries = json::array();
  for (const auto& q : report.queries) {
    const Scores s = scores_of(q.counts);
    queries.push_back({{"query", q.query},
                       {"tp", q.counts.tp},
                       {"fp", q.counts.fp},
                       {"fn", q.counts.fn},
                       {"tn", q.counts.tn},
                       {"accuracy", s.accuracy},
                       {"f1", s.f1},
                       {"iou", s.iou}});
  }
  json doc;
  doc["queries"] = std::move(queries);
  doc["aggregate"] = {{"pixel_accuracy", report.micro.accuracy}, {"f1", report.micro.f1}, {"iou", report.micro.iou}};
  doc["macro"] = {{"pixel_accuracy", report.macro.accuracy}, {"f1", report.macro.f1}, {"iou", report.macro.iou}};
  doc["pooled"] = {{"tp", report.pooled.tp}, {"fp", report.pooled.fp}, {"fn", report.pooled.fn}, {"tn", report.pooled.tn}};
  return doc.dump(2);
}

}  // namespace fg
