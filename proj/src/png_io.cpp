#include <png.h>

#include <cstring>

#include "fg/error.hpp"
#include "fg/raster.hpp"

namespace fg {

void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> pixels(mask.size());
  const auto src = mask.values();
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = src[i] ? 255 : 0;

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(mask.width());
  image.height = static_cast<png_uint_32>(mask.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr)) {
    const std::string why = image.message;
    png_image_free(&image);
    throw Error(Errc::Unwritable, path.string() + ": " + why);
  }
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(Errc::Unreadable, path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string why = image.message;
    png_image_free(&image);
    throw Error(Errc::Unreadable, path.string() + ": " + why);
  }
  return out;
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
  GrayImage img = read_png_gray(path);
  std::vector<std::uint8_t> values(img.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = img.pixels[i] >= 128 ? 1 : 0;
  return BinaryMask(img.width, img.height, std::move(values));
}

}  // namespace fg
