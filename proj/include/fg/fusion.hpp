#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fg/catalog.hpp"
#include "fg/morphology.hpp"
#include "fg/raster.hpp"
#include "fg/segment.hpp"

namespace fg {

enum class StdMode { Population, Sample };
enum class Boundary { Inclusive, Exclusive };

struct FusionConfig {
  double k1 = 3.0;
  double k2 = 1.0;
  double pixel_threshold = 0.40;
  double ratio_binarize_level = kDefaultRatioLevel;
  StructuringElement structuring_element = StructuringElement::box(3);
  StdMode std_mode = StdMode::Population;
  Boundary boundary = Boundary::Inclusive;

  /// Throws Errc::BadConfig unless k1 >= k2 > 0 and both probabilities lie in (0,1).
  void validate() const;
};

struct SigmaFilterResult {
  std::vector<std::size_t> retained;  // ascending
  double mean = 0.0;
  double sigma = 0.0;
};

/// Absolute slack on the k*sigma comparison. Two ratios always sit exactly
/// one sigma from their mean; without slack, rounding would decide the tie.
inline constexpr double kSigmaTieTolerance = 1e-12;

/// Keeps index i iff |r_i - mean| <= k*sigma + tol (inclusive) or
/// < k*sigma - tol (exclusive). A zero sigma keeps everything under the
/// inclusive rule. Sample sigma of a single value is taken as 0.
SigmaFilterResult sigma_filter(std::span<const double> ratios, double k, StdMode mode = StdMode::Population,
                               Boundary boundary = Boundary::Inclusive);

struct TwoStageResult {
  std::vector<std::size_t> retained;        // indices into the input, input order
  std::vector<std::size_t> removed_stage1;  // indices into the input
  std::vector<std::size_t> removed_stage2;
  SigmaFilterResult stage1;
  SigmaFilterResult stage2;  // statistics over the stage-1 survivors
};

/// k1 filter over all ratios, then k2 over the survivors with statistics
/// recomputed. Throws Errc::EmptyInput.
TwoStageResult two_stage_filter(std::span<const double> ratios, const FusionConfig& cfg);
TwoStageResult two_stage_filter(std::span<const Prediction> predictions, const FusionConfig& cfg);

/// Pixel-wise mean, summed in the order given. Throws Errc::EmptyInput or
/// Errc::DimensionMismatch.
ProbabilityMask average_masks(std::span<const ProbabilityMask* const> masks);
ProbabilityMask average_masks(std::span<const ProbabilityMask> masks);

/// 1 where probability > t (strict), else 0.
BinaryMask binarize(const ProbabilityMask& mask, double t);

struct FusionReport {
  std::string query_lon;
  std::string query_lat;
  int year = 0;
  int month = 0;
  std::size_t candidates = 0;
  std::vector<std::string> ids;
  std::vector<double> ratios;
  std::vector<std::size_t> removed_stage1;
  std::vector<std::size_t> removed_stage2;
  std::size_t retained = 0;
  double stage1_mean = 0.0;
  double stage1_sigma = 0.0;
  double stage2_mean = 0.0;
  double stage2_sigma = 0.0;
  StdMode std_mode = StdMode::Population;
  Boundary boundary = Boundary::Inclusive;
  std::string output;
};

struct FusionResult {
  BinaryMask mask;
  FusionReport report;
};

/// Filter, average survivors in (source, id) order, threshold, open.
/// Throws Errc::NoData on an empty list and Errc::MixedDates when a
/// prediction is not at q's location and month.
FusionResult fuse_query(const Query& q, std::span<const Prediction> predictions, const FusionConfig& cfg);

/// `deforestation_{lon}_{lat}_{year}_{month}.png` with lon/lat spelled as in the query.
std::string fused_filename(const Query& q);

std::string report_to_json(const FusionReport& report);

}  // namespace fg
