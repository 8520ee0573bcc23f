#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fg {

inline constexpr int kTileSize = 256;

enum class Satellite { Sentinel1, Sentinel2, Landsat8 };

std::string_view satellite_name(Satellite s);
std::optional<Satellite> satellite_from_name(std::string_view name);

/// Calendar date; `day == 0` means "month only" (labels).
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  bool has_day() const noexcept { return day != 0; }
  auto operator<=>(const Date&) const = default;
};

/// A grid coordinate held in hundredths of a degree, so that two tiles at
/// "-54.80" compare equal regardless of how the text was spelled.
class GridCoord {
 public:
  GridCoord() = default;
  static GridCoord from_centi(int centi) { GridCoord g; g.centi_ = centi; return g; }
  /// Decimal text on the 0.01 grid ("-54.8", "-54.80", "-54.800").
  static std::optional<GridCoord> parse(std::string_view text);

  int centi() const noexcept { return centi_; }
  double degrees() const noexcept { return centi_ / 100.0; }
  /// Always two fractional digits: -5480 -> "-54.80".
  std::string str() const;

  auto operator<=>(const GridCoord&) const = default;

 private:
  int centi_ = 0;
};

struct TileMeta {
  std::optional<Satellite> satellite;
  std::string band;
  GridCoord lon;
  GridCoord lat;
  Date date;
};

/// One band of one tile. Values are raw until preprocess normalizes them.
class BandRaster {
 public:
  BandRaster() = default;
  BandRaster(int width, int height, std::vector<float> values, TileMeta meta = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const float> values() const noexcept { return values_; }
  float at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  TileMeta meta;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

class ProbabilityMask {
 public:
  ProbabilityMask() = default;
  /// Throws Errc::OutOfRange if any value is outside [0,1] (NaN included).
  ProbabilityMask(int width, int height, std::vector<float> values);
  static ProbabilityMask filled(int width, int height, float value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const float> values() const noexcept { return values_; }
  float at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  bool operator==(const ProbabilityMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

class BinaryMask {
 public:
  BinaryMask() = default;
  /// Throws Errc::OutOfRange on any value other than 0 or 1.
  BinaryMask(int width, int height, std::vector<std::uint8_t> values);
  static BinaryMask filled(int width, int height, std::uint8_t value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const std::uint8_t> values() const noexcept { return values_; }
  std::uint8_t at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  std::size_t count_ones() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

/// Pipeline masks are always tile-sized; throws Errc::DimensionMismatch otherwise.
void require_tile_size(int width, int height, std::string_view what);

// ---- file formats -------------------------------------------------------

enum class TiffSample { UInt8, UInt16, Float32 };

/// Single-band TIFF, integer or float samples, at most 1024x1024.
/// Metadata is left unset; the catalog fills it from the filename.
BandRaster read_tiff(const std::filesystem::path& path);
void write_tiff(const BandRaster& raster, const std::filesystem::path& path,
                TiffSample sample = TiffSample::Float32);

/// Label tiles: single-channel, or two-channel with channel 1 as the
/// deforestation plane. Any non-zero sample maps to 1.
BinaryMask read_label_tiff(const std::filesystem::path& path);

/// FGPM exchange format: "FGPM", u32 version=1, u32 width, u32 height,
/// then width*height float32, all little-endian, row-major.
ProbabilityMask read_raw(const std::filesystem::path& path);
void write_raw(const ProbabilityMask& mask, const std::filesystem::path& path);

/// 8-bit grayscale PNG with 255 for 1 and 0 for 0.
void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};
GrayImage read_png_gray(const std::filesystem::path& path);
/// Decodes a mask PNG; pixels >= 128 become 1.
BinaryMask read_mask_png(const std::filesystem::path& path);

}  // namespace fg
