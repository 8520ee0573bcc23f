#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fg/catalog.hpp"
#include "fg/fusion.hpp"
#include "fg/preprocess.hpp"
#include "fg/segment.hpp"

namespace fg {

struct RunConfig {
  NormalizationTable normalization = NormalizationTable::defaults();
  std::string resize_kernel = "bilinear";
  FilenameGrammar grammar;
  FusionConfig fusion;
  IndexSegmenterParams segmenter;
  int parallelism = 0;  // 0: OpenMP default
};

/// Parses and validates a run configuration document. Every key is
/// optional; unknown keys anywhere throw Errc::BadConfig.
///
///   {
///     "normalization": {"Sentinel1": {"VV": {"lo": -30, "hi": 0}}, ...},
///     "resize": {"kernel": "bilinear"},
///     "filename_grammar": {"separator": "_", "fields": [...], "label_collection": "Deforestation"},
///     "fusion": {"k1": 3, "k2": 1, "pixel_threshold": 0.4, "ratio_binarize_level": 0.5,
///                "std_mode": "population", "boundary": "inclusive",
///                "structuring_element": [[1,1,1],[1,1,1],[1,1,1]]},
///     "segmenter": {"t_low": 0.1, "t_high": 0.3},
///     "parallelism": 4
///   }
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace fg
