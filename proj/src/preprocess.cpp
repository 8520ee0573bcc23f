#include "fg/preprocess.hpp"

#include <algorithm>

#include "fg/error.hpp"
#include "fg/kernels.hpp"

namespace fg {

namespace {

const std::vector<std::string> kSentinel1Bands = {"VV", "VH"};
const std::vector<std::string> kSentinel2Bands = {"B4", "B7", "B8", "B11", "B12"};
const std::vector<std::string> kLandsat8Bands = {"B4", "B5", "B6", "B7"};

std::string describe(const TileMeta& m) {
  std::string s = m.satellite ? std::string(satellite_name(*m.satellite)) : "?";
  return s + " " + m.band + " @ " + m.lon.str() + "," + m.lat.str() + " " + std::to_string(m.date.year) +
         "-" + std::to_string(m.date.month) + "-" + std::to_string(m.date.day);
}

}  // namespace

const std::vector<std::string>& select_bands(Satellite satellite) {
  switch (satellite) {
    case Satellite::Sentinel1: return kSentinel1Bands;
    case Satellite::Sentinel2: return kSentinel2Bands;
    case Satellite::Landsat8: return kLandsat8Bands;
  }
  throw Error(Errc::UnknownCollection, "satellite enum out of range");
}

const std::vector<std::string>& select_bands(std::string_view collection) {
  if (auto sat = satellite_from_name(collection)) return select_bands(*sat);
  if (collection == "Landsat5") throw Error(Errc::ExcludedCollection, std::string(collection));
  throw Error(Errc::UnknownCollection, std::string(collection));
}

NormalizationTable NormalizationTable::defaults() {
  NormalizationTable t;
  for (const auto& band : kSentinel1Bands) t.set(Satellite::Sentinel1, band, {-30.0, 0.0});
  for (const auto& band : kSentinel2Bands) t.set(Satellite::Sentinel2, band, {0.0, 10000.0});
  for (const auto& band : kLandsat8Bands) t.set(Satellite::Landsat8, band, {0.0, 10000.0});
  return t;
}

void NormalizationTable::set(Satellite satellite, const std::string& band, BandRange range) {
  if (!(range.hi > range.lo)) {
    throw Error(Errc::BadConfig, "normalization range for " + std::string(satellite_name(satellite)) + " " +
                                     band + " needs hi > lo");
  }
  entries_[{satellite, band}] = range;
}

const BandRange& NormalizationTable::at(Satellite satellite, const std::string& band) const {
  auto it = entries_.find({satellite, band});
  if (it == entries_.end()) {
    throw Error(Errc::MissingEntry, "no normalization range for " + std::string(satellite_name(satellite)) +
                                        " " + band);
  }
  return it->second;
}

bool NormalizationTable::contains(Satellite satellite, const std::string& band) const {
  return entries_.contains({satellite, band});
}

const BandRaster& ImageStack::channel(std::string_view band) const {
  for (const auto& c : channels) {
    if (c.meta.band == band) return c;
  }
  throw Error(Errc::MissingBand, std::string(band) + " not in " + std::string(satellite_name(satellite)) + " stack");
}

BandRaster resize_bilinear(const BandRaster& raster, int out_width, int out_height) {
  if (raster.width() < 2 || raster.height() < 2) {
    throw Error(Errc::TooSmall, "resize input " + std::to_string(raster.width()) + "x" +
                                    std::to_string(raster.height()) + " is below 2x2");
  }
  if (raster.width() == out_width && raster.height() == out_height) return raster;
  std::vector<float> out(static_cast<std::size_t>(out_width) * out_height);
  kernels::parallel::resize_bilinear(raster.values(), raster.width(), raster.height(), out, out_width,
                                     out_height);
  return BandRaster(out_width, out_height, std::move(out), raster.meta);
}

BandRaster normalize(const BandRaster& raster, const NormalizationTable& table) {
  if (!raster.meta.satellite) throw Error(Errc::MissingEntry, "raster has no satellite: " + describe(raster.meta));
  const BandRange& range = table.at(*raster.meta.satellite, raster.meta.band);
  std::vector<float> out(raster.values().size());
  kernels::parallel::normalize(raster.values(), range.lo, range.hi, out);
  return BandRaster(raster.width(), raster.height(), std::move(out), raster.meta);
}

ImageStack assemble_stack(std::span<const BandRaster> rasters, const NormalizationTable& table) {
  if (rasters.empty()) throw Error(Errc::MissingBand, "no rasters");
  const TileMeta& first = rasters.front().meta;
  if (!first.satellite) throw Error(Errc::MissingEntry, "raster has no satellite: " + describe(first));
  for (const auto& r : rasters) {
    const TileMeta& m = r.meta;
    if (m.satellite != first.satellite || m.lon != first.lon || m.lat != first.lat || m.date != first.date) {
      throw Error(Errc::MixedDates, describe(m) + " does not match " + describe(first));
    }
  }

  ImageStack stack;
  stack.satellite = *first.satellite;
  stack.lon = first.lon;
  stack.lat = first.lat;
  stack.date = first.date;
  for (const auto& band : select_bands(stack.satellite)) {
    const BandRaster* found = nullptr;
    for (const auto& r : rasters) {
      if (r.meta.band != band) continue;
      if (found) throw Error(Errc::DuplicateBand, describe(r.meta));
      found = &r;
    }
    if (!found) {
      throw Error(Errc::MissingBand, band + " for " + std::string(satellite_name(stack.satellite)) + " @ " +
                                         first.lon.str() + "," + first.lat.str());
    }
    BandRaster sized = (found->width() == kTileSize && found->height() == kTileSize) ? *found
                                                                                      : resize_bilinear(*found);
    stack.channels.push_back(normalize(sized, table));
  }
  return stack;
}

ImageStack load_stack(const CandidateSet& set, const NormalizationTable& table) {
  std::vector<BandRaster> rasters;
  rasters.reserve(set.bands.size());
  for (const auto& rec : set.bands) {
    BandRaster r = read_tiff(rec.path);
    r.meta = TileMeta{rec.satellite, rec.band, rec.lon, rec.lat, rec.date};
    rasters.push_back(std::move(r));
  }
  return assemble_stack(rasters, table);
}

}  // namespace fg
