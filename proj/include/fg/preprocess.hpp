#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fg/catalog.hpp"
#include "fg/raster.hpp"

namespace fg {

/// Bands kept per satellite, in stack channel order:
///   Sentinel1 -> VV, VH
///   Sentinel2 -> B4, B7, B8, B11, B12
///   Landsat8  -> B4, B5, B6, B7
const std::vector<std::string>& select_bands(Satellite satellite);
/// Same lookup by collection name; "Landsat5" throws Errc::ExcludedCollection,
/// anything else unrecognized throws Errc::UnknownCollection.
const std::vector<std::string>& select_bands(std::string_view collection);

struct BandRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Physical value range mapped onto [0,1] per (satellite, band).
class NormalizationTable {
 public:
  /// Reflectance bands 0..10000; Sentinel-1 VV/VH -30..0 dB.
  static NormalizationTable defaults();

  /// Throws Errc::BadConfig unless hi > lo.
  void set(Satellite satellite, const std::string& band, BandRange range);
  /// Throws Errc::MissingEntry.
  const BandRange& at(Satellite satellite, const std::string& band) const;
  bool contains(Satellite satellite, const std::string& band) const;
  const std::map<std::pair<Satellite, std::string>, BandRange>& entries() const { return entries_; }

 private:
  std::map<std::pair<Satellite, std::string>, BandRange> entries_;
};

struct ImageStack {
  Satellite satellite = Satellite::Sentinel2;
  GridCoord lon;
  GridCoord lat;
  Date date;
  std::vector<BandRaster> channels;  // normalized, 256x256, select_bands() order

  const BandRaster& channel(std::string_view band) const;
};

/// Corner-aligned bilinear resampling. Throws Errc::TooSmall below 2x2.
BandRaster resize_bilinear(const BandRaster& raster, int out_width = kTileSize,
                           int out_height = kTileSize);

/// v' = clamp((v - lo) / (hi - lo), 0, 1); non-finite pixels become 0.
BandRaster normalize(const BandRaster& raster, const NormalizationTable& table);

/// Builds a stack from raw band rasters whose metadata is populated. Bands
/// outside select_bands() are ignored; non-tile-sized rasters are resized
/// before normalization.
ImageStack assemble_stack(std::span<const BandRaster> rasters, const NormalizationTable& table);

/// Reads each band TIFF of a catalog acquisition, stamps metadata from the
/// record, and assembles the stack.
ImageStack load_stack(const CandidateSet& set, const NormalizationTable& table);

}  // namespace fg
