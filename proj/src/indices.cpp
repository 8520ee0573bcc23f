#include "fg/indices.hpp"

#include <algorithm>

#include "fg/error.hpp"
#include "kernels/pixel_ops.hpp"

namespace fg {

namespace {

BandRaster lift(const BandRaster& a, const BandRaster& b, const char* name) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::DimensionMismatch, std::string(name) + " operands differ in size");
  }
  const auto av = a.values();
  const auto bv = b.values();
  std::vector<float> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    out[i] = static_cast<float>(kernels::detail::normalized_difference(std::max(0.0f, av[i]), std::max(0.0f, bv[i])));
  }
  TileMeta meta = a.meta;
  meta.band = name;
  return BandRaster(a.width(), a.height(), std::move(out), std::move(meta));
}

}  // namespace

double nbr(double nir, double swir) { return kernels::detail::normalized_difference(nir, swir); }

double ndvi(double nir, double red) { return kernels::detail::normalized_difference(nir, red); }

BandRoles band_roles(Satellite satellite) {
  switch (satellite) {
    case Satellite::Sentinel2: return {"B8", "B11", "B4"};
    case Satellite::Landsat8: return {"B5", "B6", "B4"};
    case Satellite::Sentinel1: break;
  }
  throw Error(Errc::RequiresOptical, std::string(satellite_name(satellite)));
}

BandRaster nbr(const BandRaster& nir, const BandRaster& swir) { return lift(nir, swir, "NBR"); }

BandRaster ndvi(const BandRaster& nir, const BandRaster& red) { return lift(nir, red, "NDVI"); }

}  // namespace fg
