#include "fg/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <json.hpp>

#include "fg/error.hpp"
#include "fg/kernels.hpp"

namespace fg {

void FusionConfig::validate() const {
  if (!(k2 > 0.0) || !(k1 >= k2)) {
    throw Error(Errc::BadConfig, "fusion needs k1 >= k2 > 0 (k1=" + std::to_string(k1) + ", k2=" + std::to_string(k2) + ")");
  }
  if (!(pixel_threshold > 0.0 && pixel_threshold < 1.0)) {
    throw Error(Errc::BadConfig, "pixel_threshold must lie in (0,1)");
  }
  if (!(ratio_binarize_level > 0.0 && ratio_binarize_level < 1.0)) {
    throw Error(Errc::BadConfig, "ratio_binarize_level must lie in (0,1)");
  }
}

SigmaFilterResult sigma_filter(std::span<const double> ratios, double k, StdMode mode, Boundary boundary) {
  if (ratios.empty()) throw Error(Errc::EmptyInput, "sigma_filter needs at least one ratio");
  const auto n = static_cast<double>(ratios.size());

  SigmaFilterResult out;
  const bool constant = std::all_of(ratios.begin(), ratios.end(), [&](double r) { return r == ratios.front(); });
  if (constant) {
    out.mean = ratios.front();
    out.sigma = 0.0;
  } else {
    double sum = 0.0;
    for (double r : ratios) sum += r;
    out.mean = sum / n;
    double ss = 0.0;
    for (double r : ratios) ss += (r - out.mean) * (r - out.mean);
    const double denom = mode == StdMode::Population ? n : n - 1.0;
    out.sigma = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
  }

  const double bound = k * out.sigma;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double dev = std::abs(ratios[i] - out.mean);
    const bool keep = boundary == Boundary::Inclusive ? dev <= bound + kSigmaTieTolerance
                                                      : dev < bound - kSigmaTieTolerance;
    if (keep) out.retained.push_back(i);
  }
  return out;
}

TwoStageResult two_stage_filter(std::span<const double> ratios, const FusionConfig& cfg) {
  if (ratios.empty()) throw Error(Errc::EmptyInput, "two_stage_filter needs at least one prediction");
  TwoStageResult out;
  out.stage1 = sigma_filter(ratios, cfg.k1, cfg.std_mode, cfg.boundary);

  std::vector<bool> kept1(ratios.size(), false);
  for (std::size_t i : out.stage1.retained) kept1[i] = true;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!kept1[i]) out.removed_stage1.push_back(i);
  }
  if (out.stage1.retained.empty()) return out;

  std::vector<double> survivors;
  survivors.reserve(out.stage1.retained.size());
  for (std::size_t i : out.stage1.retained) survivors.push_back(ratios[i]);
  out.stage2 = sigma_filter(survivors, cfg.k2, cfg.std_mode, cfg.boundary);

  std::vector<bool> kept2(survivors.size(), false);
  for (std::size_t j : out.stage2.retained) kept2[j] = true;
  for (std::size_t j = 0; j < survivors.size(); ++j) {
    const std::size_t original = out.stage1.retained[j];
    (kept2[j] ? out.retained : out.removed_stage2).push_back(original);
  }
  return out;
}

TwoStageResult two_stage_filter(std::span<const Prediction> predictions, const FusionConfig& cfg) {
  std::vector<double> ratios;
  ratios.reserve(predictions.size());
  for (const auto& p : predictions) ratios.push_back(p.ratio());
  return two_stage_filter(ratios, cfg);
}

ProbabilityMask average_masks(std::span<const ProbabilityMask* const> masks) {
  if (masks.empty()) throw Error(Errc::EmptyInput, "average_masks needs at least one mask");
  const int w = masks.front()->width();
  const int h = masks.front()->height();
  std::vector<std::span<const float>> planes;
  planes.reserve(masks.size());
  for (const ProbabilityMask* m : masks) {
    if (m->width() != w || m->height() != h) {
      throw Error(Errc::DimensionMismatch, "average_masks: " + std::to_string(m->width()) + "x" +
                                               std::to_string(m->height()) + " vs " + std::to_string(w) + "x" +
                                               std::to_string(h));
    }
    planes.push_back(m->values());
  }
  std::vector<float> out(static_cast<std::size_t>(w) * h);
  kernels::parallel::mean(planes, out);
  return ProbabilityMask(w, h, std::move(out));
}

ProbabilityMask average_masks(std::span<const ProbabilityMask> masks) {
  std::vector<const ProbabilityMask*> ptrs;
  ptrs.reserve(masks.size());
  for (const auto& m : masks) ptrs.push_back(&m);
  return average_masks(ptrs);
}

BinaryMask binarize(const ProbabilityMask& mask, double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(Errc::OutOfRange, "binarize threshold " + std::to_string(t));
  std::vector<std::uint8_t> out(mask.size());
  // Compare in the mask's own precision so that a stored 0.40f is not "over" 0.40.
  kernels::parallel::threshold_above(mask.values(), static_cast<float>(t), out);
  return BinaryMask(mask.width(), mask.height(), std::move(out));
}

FusionResult fuse_query(const Query& q, std::span<const Prediction> predictions, const FusionConfig& cfg) {
  cfg.validate();
  if (predictions.empty()) {
    throw Error(Errc::NoData, q.lon.str() + "," + q.lat.str() + " " + std::to_string(q.year) + "-" +
                                  std::to_string(q.month));
  }
  for (const auto& p : predictions) {
    const auto& m = p.meta();
    if (m.lon != q.lon || m.lat != q.lat || m.date.year != q.year || m.date.month != q.month) {
      throw Error(Errc::MixedDates, m.id + " does not belong to query " + q.lon.str() + "," + q.lat.str());
    }
  }

  FusionReport report;
  report.query_lon = q.lon_text.empty() ? q.lon.str() : q.lon_text;
  report.query_lat = q.lat_text.empty() ? q.lat.str() : q.lat_text;
  report.year = q.year;
  report.month = q.month;
  report.candidates = predictions.size();
  report.std_mode = cfg.std_mode;
  report.boundary = cfg.boundary;
  for (const auto& p : predictions) {
    report.ids.push_back(p.meta().id);
    report.ratios.push_back(p.ratio());
  }

  TwoStageResult filtered = two_stage_filter(report.ratios, cfg);
  report.removed_stage1 = filtered.removed_stage1;
  report.removed_stage2 = filtered.removed_stage2;
  report.retained = filtered.retained.size();
  report.stage1_mean = filtered.stage1.mean;
  report.stage1_sigma = filtered.stage1.sigma;
  report.stage2_mean = filtered.stage2.mean;
  report.stage2_sigma = filtered.stage2.sigma;
  if (filtered.retained.empty()) {
    // Only reachable with the exclusive boundary.
    throw Error(Errc::NoData, "every prediction was filtered out for " + q.lon.str() + "," + q.lat.str());
  }

  std::vector<const Prediction*> survivors;
  for (std::size_t i : filtered.retained) survivors.push_back(&predictions[i]);
  std::sort(survivors.begin(), survivors.end(), [](const Prediction* a, const Prediction* b) {
    return std::tie(a->meta().source, a->meta().id) < std::tie(b->meta().source, b->meta().id);
  });
  std::vector<const ProbabilityMask*> masks;
  for (const Prediction* p : survivors) masks.push_back(&p->mask());

  const ProbabilityMask mean = average_masks(masks);
  BinaryMask fused = open(binarize(mean, cfg.pixel_threshold), cfg.structuring_element);
  report.output = fused_filename(q);
  return {std::move(fused), std::move(report)};
}

std::string fused_filename(const Query& q) {
  const std::string lon = q.lon_text.empty() ? q.lon.str() : q.lon_text;
  const std::string lat = q.lat_text.empty() ? q.lat.str() : q.lat_text;
  return "deforestation_" + lon + "_" + lat + "_" + std::to_string(q.year) + "_" +
         (q.month < 10 ? "0" : "") + std::to_string(q.month) + ".png";
}

std::string report_to_json(const FusionReport& r) {
  nlohmann::json j;
  j["query"] = {{"lon", r.query_lon}, {"lat", r.query_lat}, {"year", r.year}, {"month", r.month}};
  j["candidates"] = r.candidates;
  j["ids"] = r.ids;
  j["ratios"] = r.ratios;
  j["removed_stage1"] = r.removed_stage1;
  j["removed_stage2"] = r.removed_stage2;
  j["retained"] = r.retained;
  j["stage1"] = {{"mean", r.stage1_mean}, {"sigma", r.stage1_sigma}};
  j["stage2"] = {{"mean", r.stage2_mean}, {"sigma", r.stage2_sigma}};
  j["std_mode"] = r.std_mode == StdMode::Population ? "population" : "sample";
  j["boundary"] = r.boundary == Boundary::Inclusive ? "inclusive" : "exclusive";
  j["output"] = r.output;
  return j.dump(2);
}

}  // namespace fg
