#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fg/raster.hpp"

namespace fg {

/// Recipe for one synthetic scene. Expansion is deterministic: the same spec
/// always produces byte-identical files.
struct SceneSpec {
  std::uint64_t seed = 1;
  GridCoord lon = GridCoord::from_centi(-5480);
  GridCoord lat = GridCoord::from_centi(-367);
  std::vector<std::pair<int, int>> months;  // (year, month)
  int sentinel1_dates = 1;                  // per month
  int sentinel2_dates = 8;
  int landsat8_dates = 5;
  /// Gaussian noise in reflectance units; SAR channels get noise_sigma / 100 dB.
  double noise_sigma = 200.0;
  /// Per month, the probability that one optical acquisition is rendered as
  /// a failed capture (forest spectra everywhere), which the index segmenter
  /// turns into an all-black prediction.
  double outlier_rate = 0.0;
};

struct SceneManifest {
  std::uint64_t seed = 0;
  GridCoord lon;
  GridCoord lat;
  std::vector<std::pair<int, int>> months;
  std::vector<std::string> files;     // relative to the generation root
  std::vector<std::string> outliers;  // acquisition ids rendered as failures
};

/// Band values for the two surface classes, in reflectance units (optical)
/// or dB (SAR). Forest sits at NBR 0.6 / NDVI 0.7, cleared ground at
/// NBR -0.2 / NDVI -0.1.
struct Spectra {
  double red, red_edge, nir, swir1, swir2, vv, vh;
};
const Spectra& forest_spectra();
const Spectra& cleared_spectra();

/// Ground truth for month index `month_index` of `spec` (0-based). Labels
/// only grow from one month to the next.
BinaryMask scene_label(const SceneSpec& spec, std::size_t month_index);

/// Writes the scene's band and label TIFFs plus `<out_dir>/manifest.json`.
/// Throws Errc::Unwritable.
SceneManifest generate_scene(const SceneSpec& spec, const std::filesystem::path& out_dir);

struct CorpusSpec {
  int scenes = 0;
  std::uint64_t base_seed = 1;
  SceneSpec scene;  // seed, lon and lat are overwritten per scene
};

/// One subdirectory per scene at distinct grid coordinates, plus an
/// aggregate `manifest.json` and a `queries.csv` (lat,lon,year,month) at the root.
std::vector<SceneManifest> generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

std::vector<SceneManifest> load_manifest(const std::filesystem::path& path);

}  // namespace fg
