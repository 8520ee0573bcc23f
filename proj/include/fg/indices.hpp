#pragma once

#include <string>

#include "fg/raster.hpp"

namespace fg {

/// (NIR - SWIR) / (NIR + SWIR). Inputs are non-negative; 0/0 is defined as 0.
double nbr(double nir, double swir);
/// (NIR - RED) / (NIR + RED), same conventions as nbr().
double ndvi(double nir, double red);

/// Which stack bands play the NIR / SWIR / RED roles for an optical satellite.
struct BandRoles {
  std::string nir;
  std::string swir;
  std::string red;
};

/// Sentinel2: B8 / B11 / B4. Landsat8: B5 / B6 / B4.
/// Sentinel1 throws Errc::RequiresOptical.
BandRoles band_roles(Satellite satellite);

/// Pixel-wise lifts. Negative samples are clamped to 0 first; output keeps
/// the metadata of the first argument with the band renamed.
BandRaster nbr(const BandRaster& nir, const BandRaster& swir);
BandRaster ndvi(const BandRaster& nir, const BandRaster& red);

}  // namespace fg
