#include "fg/morphology.hpp"

#include <algorithm>

#include "fg/error.hpp"

namespace fg {

StructuringElement::StructuringElement(int width, int height, std::vector<std::uint8_t> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width_ <= 0 || height_ <= 0 || width_ % 2 == 0 || height_ % 2 == 0) {
    throw Error(Errc::BadConfig, "structuring element must have odd positive sides, got " +
                                     std::to_string(width_) + "x" + std::to_string(height_));
  }
  if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
    throw Error(Errc::BadConfig, "structuring element cell count does not match its size");
  }
  for (std::uint8_t c : cells_) {
    if (c > 1) throw Error(Errc::BadConfig, "structuring element cells must be 0 or 1");
  }
  if (!at(width_ / 2, height_ / 2)) throw Error(Errc::BadConfig, "structuring element center must be 1");
}

StructuringElement StructuringElement::box(int size) {
  return StructuringElement(size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 1));
}

StructuringElement StructuringElement::reflected() const {
  std::vector<std::uint8_t> out(cells_.rbegin(), cells_.rend());
  return StructuringElement(width_, height_, std::move(out));
}

BinaryMask erode(const BinaryMask& image, const StructuringElement& se, Padding pad) {
  std::vector<std::uint8_t> out(image.size());
  kernels::parallel::erode(image.values(), image.width(), image.height(), se.view(),
                           static_cast<std::uint8_t>(pad), out);
  return BinaryMask(image.width(), image.height(), std::move(out));
}

BinaryMask dilate(const BinaryMask& image, const StructuringElement& se, Padding pad) {
  std::vector<std::uint8_t> out(image.size());
  kernels::parallel::dilate(image.values(), image.width(), image.height(), se.view(),
                            static_cast<std::uint8_t>(pad), out);
  return BinaryMask(image.width(), image.height(), std::move(out));
}

BinaryMask open(const BinaryMask& image, const StructuringElement& se) { return dilate(erode(image, se), se); }

BinaryMask complement(const BinaryMask& image) {
  std::vector<std::uint8_t> out(image.values().begin(), image.values().end());
  for (auto& v : out) v = 1 - v;
  return BinaryMask(image.width(), image.height(), std::move(out));
}

}  // namespace fg
