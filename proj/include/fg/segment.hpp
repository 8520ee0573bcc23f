#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fg/preprocess.hpp"
#include "fg/raster.hpp"

namespace fg {

inline constexpr double kDefaultRatioLevel = 0.5;

/// Fraction of pixels with probability >= level. Level must lie in (0,1).
double deforestation_ratio(const ProbabilityMask& mask, double level = kDefaultRatioLevel);

struct PredictionMeta {
  Satellite satellite = Satellite::Sentinel2;
  GridCoord lon;
  GridCoord lat;
  Date date;
  std::vector<std::string> band_set;
  std::string source;  // predictor name or imported file
  std::string id;      // unique per acquisition, e.g. "Sentinel2_-54.80_-3.67_2020_08_15"
};

/// A per-acquisition deforestation mask with its ratio computed once at
/// construction under the given binarization level.
class Prediction {
 public:
  Prediction(ProbabilityMask mask, PredictionMeta meta, double ratio_level = kDefaultRatioLevel);

  const ProbabilityMask& mask() const noexcept { return mask_; }
  const PredictionMeta& meta() const noexcept { return meta_; }
  double ratio() const noexcept { return ratio_; }
  double ratio_level() const noexcept { return level_; }

 private:
  ProbabilityMask mask_;
  PredictionMeta meta_;
  double level_;
  double ratio_;
};

std::string acquisition_id(Satellite satellite, GridCoord lon, GridCoord lat, Date date);

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual ProbabilityMask predict(const ImageStack& stack) const = 0;
};

struct IndexSegmenterParams {
  double t_low = 0.1;
  double t_high = 0.3;
};

/// Linear ramp on NBR: NBR <= t_low -> 1, NBR >= t_high -> 0. Channels are
/// de-normalized through `table` before the index is taken. Sentinel-1
/// stacks throw Errc::RequiresOptical.
ProbabilityMask index_predict(const ImageStack& stack, const IndexSegmenterParams& params,
                              const NormalizationTable& table);

class IndexSegmenter final : public Predictor {
 public:
  IndexSegmenter(IndexSegmenterParams params, NormalizationTable table);
  std::string name() const override { return "index"; }
  ProbabilityMask predict(const ImageStack& stack) const override;

 private:
  IndexSegmenterParams params_;
  NormalizationTable table_;
};

/// Runs `predictor` and wraps the result with the stack's metadata.
Prediction predict_stack(const Predictor& predictor, const ImageStack& stack,
                         double ratio_level = kDefaultRatioLevel);

/// Sidecar JSON keys: satellite, band_set, lon, lat, year, month, day, source.
std::filesystem::path sidecar_path(const std::filesystem::path& fgpm_path);

/// Reads an FGPM mask and its sidecar. The mask must be 256x256; missing
/// sidecar keys throw Errc::MissingKey naming every absent key.
Prediction import_mask(const std::filesystem::path& fgpm_path, const std::filesystem::path& sidecar,
                       double ratio_level = kDefaultRatioLevel);

/// Writes `<dir>/<id>.fgpm` and its sidecar; returns the FGPM path.
std::filesystem::path export_prediction(const Prediction& prediction, const std::filesystem::path& dir);

}  // namespace fg
