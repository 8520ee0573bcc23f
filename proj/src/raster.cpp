#include "fg/raster.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "binary_io.hpp"
#include "fg/error.hpp"

namespace fg {

namespace {

constexpr std::array<char, 4> kFgpmMagic = {'F', 'G', 'P', 'M'};
constexpr std::uint32_t kFgpmVersion = 1;
constexpr std::size_t kFgpmHeader = 16;

using binio::get_u32;
using binio::put_u32;

void check_dims(int width, int height, std::size_t n) {
  if (width < 0 || height < 0 ||
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != n) {
    throw Error(Errc::DimensionMismatch, "values length " + std::to_string(n) + " != " +
                                             std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

std::string_view satellite_name(Satellite s) {
  switch (s) {
    case Satellite::Sentinel1: return "Sentinel1";
    case Satellite::Sentinel2: return "Sentinel2";
    case Satellite::Landsat8: return "Landsat8";
  }
  return "?";
}

std::optional<Satellite> satellite_from_name(std::string_view name) {
  if (name == "Sentinel1") return Satellite::Sentinel1;
  if (name == "Sentinel2") return Satellite::Sentinel2;
  if (name == "Landsat8") return Satellite::Landsat8;
  return std::nullopt;
}

std::optional<GridCoord> GridCoord::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  long whole = 0;
  int whole_digits = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    whole = whole * 10 + (text[i] - '0');
    if (++whole_digits > 3) return std::nullopt;
  }
  int frac = 0;
  int frac_digits = 0;
  if (i < text.size()) {
    ++i;  // '.'
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      // digits past the hundredths must be zeros: the value has to sit on the grid
      if (++frac_digits > 2) {
        if (text[i] != '0') return std::nullopt;
        continue;
      }
      frac = frac * 10 + (text[i] - '0');
    }
    if (frac_digits == 0) return std::nullopt;
    if (frac_digits == 1) frac *= 10;
  }
  if (whole_digits == 0) return std::nullopt;
  long centi = whole * 100 + frac;
  return from_centi(static_cast<int>(negative ? -centi : centi));
}

std::string GridCoord::str() const {
  const int mag = std::abs(centi_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%d.%02d", centi_ < 0 ? "-" : "", mag / 100, mag % 100);
  return buf;
}

BandRaster::BandRaster(int width, int height, std::vector<float> values, TileMeta meta_in)
    : meta(std::move(meta_in)), width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height, values_.size());
}

ProbabilityMask::ProbabilityMask(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height, values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const float v = values_[i];
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw Error(Errc::OutOfRange, "probability " + std::to_string(v) + " at index " + std::to_string(i));
    }
  }
}

ProbabilityMask ProbabilityMask::filled(int width, int height, float value) {
  return ProbabilityMask(width, height,
                         std::vector<float>(static_cast<std::size_t>(width) * height, value));
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height, values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > 1) {
      throw Error(Errc::OutOfRange, "binary value " + std::to_string(values_[i]) + " at index " + std::to_string(i));
    }
  }
}

BinaryMask BinaryMask::filled(int width, int height, std::uint8_t value) {
  return BinaryMask(width, height,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
}

std::size_t BinaryMask::count_ones() const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

void require_tile_size(int width, int height, std::string_view what) {
  if (width != kTileSize || height != kTileSize) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " is " + std::to_string(width) + "x" +
                                             std::to_string(height) + ", expected 256x256");
  }
}

ProbabilityMask read_raw(const std::filesystem::path& path) {
  const std::vector<char> bytes = binio::read_file(path);
  if (bytes.size() < 4 || !std::equal(kFgpmMagic.begin(), kFgpmMagic.end(), bytes.begin())) {
    throw Error(Errc::BadMagic, path.string());
  }
  if (bytes.size() < kFgpmHeader) throw Error(Errc::LengthMismatch, path.string() + ": truncated header");
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kFgpmVersion) {
    throw Error(Errc::UnsupportedFormat, path.string() + ": FGPM version " + std::to_string(version));
  }
  const std::uint32_t width = get_u32(bytes.data() + 8);
  const std::uint32_t height = get_u32(bytes.data() + 12);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() - kFgpmHeader != n * 4) {
    throw Error(Errc::LengthMismatch, path.string() + ": header says " + std::to_string(width) + "x" +
                                          std::to_string(height) + ", payload has " +
                                          std::to_string(bytes.size() - kFgpmHeader) + " bytes");
  }
  std::vector<float> values(n);
  binio::get_floats(bytes.data() + kFgpmHeader, values);
  return ProbabilityMask(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

void write_raw(const ProbabilityMask& mask, const std::filesystem::path& path) {
  std::vector<char> bytes;
  bytes.reserve(kFgpmHeader + 4 * mask.size());
  bytes.insert(bytes.end(), kFgpmMagic.begin(), kFgpmMagic.end());
  put_u32(bytes, kFgpmVersion);
  put_u32(bytes, static_cast<std::uint32_t>(mask.width()));
  put_u32(bytes, static_cast<std::uint32_t>(mask.height()));
  binio::put_floats(bytes, mask.values());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Unwritable, path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Unwritable, path.string());
}

}  // namespace fg
