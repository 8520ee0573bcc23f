#pragma once

#include <cstdint>
#include <vector>

#include "fg/kernels.hpp"
#include "fg/raster.hpp"

namespace fg {

/// Binary neighborhood with odd sides, anchored at the center cell, which
/// must be set.
class StructuringElement {
 public:
  /// Throws Errc::BadConfig when the invariants do not hold.
  StructuringElement(int width, int height, std::vector<std::uint8_t> cells);
  /// size x size all-ones square.
  static StructuringElement box(int size = 3);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint8_t at(int x, int y) const { return cells_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }
  /// Point reflection through the center.
  StructuringElement reflected() const;
  kernels::Element view() const { return {cells_, width_, height_}; }

  bool operator==(const StructuringElement&) const = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

/// Value assumed for pixels outside the image.
enum class Padding : std::uint8_t { Zeros = 0, Ones = 1 };

/// Pixel is 1 iff every set cell of `se`, centered there, lands on a 1.
BinaryMask erode(const BinaryMask& image, const StructuringElement& se, Padding pad = Padding::Zeros);
/// Pixel is 1 iff any set cell of the reflected `se` lands on a 1.
BinaryMask dilate(const BinaryMask& image, const StructuringElement& se, Padding pad = Padding::Zeros);
/// dilate(erode(image)), zero padding.
BinaryMask open(const BinaryMask& image, const StructuringElement& se);

BinaryMask complement(const BinaryMask& image);

}  // namespace fg
