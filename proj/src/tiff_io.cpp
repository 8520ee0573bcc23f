#include <tiffio.h>

#include <cstring>
#include <memory>
#include <mutex>

#include "fg/error.hpp"
#include "fg/raster.hpp"

namespace fg {

namespace {

constexpr std::uint32_t kMaxTiffSide = 1024;

void silence_libtiff() {
  static std::once_flag once;
  std::call_once(once, [] {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
  });
}

struct TiffCloser {
  void operator()(TIFF* t) const { TIFFClose(t); }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

struct Samples {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint16_t channels = 1;
  std::vector<double> values;  // interleaved, row-major
};

double decode_sample(const unsigned char* p, std::uint16_t format, std::uint16_t bits) {
  switch (format) {
    case SAMPLEFORMAT_UINT:
      switch (bits) {
        case 8: return *p;
        case 16: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
        case 32: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
      }
      break;
    case SAMPLEFORMAT_INT:
      switch (bits) {
        case 8: return static_cast<std::int8_t>(*p);
        case 16: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
        case 32: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
      }
      break;
    case SAMPLEFORMAT_IEEEFP:
      switch (bits) {
        case 32: { float v; std::memcpy(&v, p, 4); return v; }
        case 64: { double v; std::memcpy(&v, p, 8); return v; }
      }
      break;
  }
  return 0.0;
}

bool supported(std::uint16_t format, std::uint16_t bits) {
  switch (format) {
    case SAMPLEFORMAT_UINT:
    case SAMPLEFORMAT_INT: return bits == 8 || bits == 16 || bits == 32;
    case SAMPLEFORMAT_IEEEFP: return bits == 32 || bits == 64;
  }
  return false;
}

Samples read_samples(const std::filesystem::path& path, std::uint16_t max_channels) {
  silence_libtiff();
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec) || std::filesystem::file_size(path, ec) == 0) {
    throw Error(Errc::Unreadable, path.string());
  }
  TiffPtr tif(TIFFOpen(path.c_str(), "r"));
  if (!tif) throw Error(Errc::Unreadable, path.string());

  Samples s;
  std::uint16_t bits = 0, format = SAMPLEFORMAT_UINT, planar = PLANARCONFIG_CONTIG;
  if (!TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &s.width) ||
      !TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &s.height)) {
    throw Error(Errc::Unreadable, path.string() + ": missing image dimensions");
  }
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &s.channels);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bits);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &format);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);

  if (s.channels > max_channels) {
    throw Error(Errc::MultiBand, path.string() + ": " + std::to_string(s.channels) + " samples per pixel");
  }
  if (!supported(format, bits) || (s.channels > 1 && planar != PLANARCONFIG_CONTIG)) {
    throw Error(Errc::UnsupportedFormat, path.string() + ": format " + std::to_string(format) + ", " +
                                             std::to_string(bits) + " bits");
  }
  if (s.width == 0 || s.height == 0 || s.width > kMaxTiffSide || s.height > kMaxTiffSide) {
    throw Error(Errc::UnsupportedFormat, path.string() + ": size " + std::to_string(s.width) + "x" +
                                             std::to_string(s.height) + " outside 1..1024");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t pixel_bytes = bytes_per_sample * s.channels;
  s.values.assign(static_cast<std::size_t>(s.width) * s.height * s.channels, 0.0);

  auto store_row = [&](const unsigned char* row, std::uint32_t y, std::uint32_t x0, std::uint32_t count) {
    for (std::uint32_t x = 0; x < count; ++x) {
      for (std::uint16_t c = 0; c < s.channels; ++c) {
        s.values[(static_cast<std::size_t>(y) * s.width + x0 + x) * s.channels + c] =
            decode_sample(row + x * pixel_bytes + c * bytes_per_sample, format, bits);
      }
    }
  };

  if (TIFFIsTiled(tif.get())) {
    std::uint32_t tw = 0, th = 0;
    TIFFGetField(tif.get(), TIFFTAG_TILEWIDTH, &tw);
    TIFFGetField(tif.get(), TIFFTAG_TILELENGTH, &th);
    std::vector<unsigned char> tile(static_cast<std::size_t>(TIFFTileSize(tif.get())));
    for (std::uint32_t ty = 0; ty < s.height; ty += th) {
      for (std::uint32_t tx = 0; tx < s.width; tx += tw) {
        if (TIFFReadTile(tif.get(), tile.data(), tx, ty, 0, 0) < 0) {
          throw Error(Errc::Unreadable, path.string() + ": tile decode failed");
        }
        const std::uint32_t rows = std::min(th, s.height - ty);
        const std::uint32_t cols = std::min(tw, s.width - tx);
        for (std::uint32_t r = 0; r < rows; ++r) {
          store_row(tile.data() + static_cast<std::size_t>(r) * tw * pixel_bytes, ty + r, tx, cols);
        }
      }
    }
  } else {
    std::vector<unsigned char> line(static_cast<std::size_t>(TIFFScanlineSize(tif.get())));
    for (std::uint32_t y = 0; y < s.height; ++y) {
      if (TIFFReadScanline(tif.get(), line.data(), y, 0) < 0) {
        throw Error(Errc::Unreadable, path.string() + ": scanline " + std::to_string(y));
      }
      store_row(line.data(), y, 0, s.width);
    }
  }
  return s;
}

}  // namespace

BandRaster read_tiff(const std::filesystem::path& path) {
  Samples s = read_samples(path, 1);
  std::vector<float> values(s.values.begin(), s.values.end());
  return BandRaster(static_cast<int>(s.width), static_cast<int>(s.height), std::move(values));
}

BinaryMask read_label_tiff(const std::filesystem::path& path) {
  Samples s = read_samples(path, 2);
  const std::uint16_t plane = s.channels == 2 ? 1 : 0;
  std::vector<std::uint8_t> values(static_cast<std::size_t>(s.width) * s.height);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = s.values[i * s.channels + plane] != 0.0 ? 1 : 0;
  }
  return BinaryMask(static_cast<int>(s.width), static_cast<int>(s.height), std::move(values));
}

void write_tiff(const BandRaster& raster, const std::filesystem::path& path, TiffSample sample) {
  silence_libtiff();
  TiffPtr tif(TIFFOpen(path.c_str(), "w"));
  if (!tif) throw Error(Errc::Unwritable, path.string());

  std::uint16_t bits = 32, format = SAMPLEFORMAT_IEEEFP;
  switch (sample) {
    case TiffSample::UInt8: bits = 8; format = SAMPLEFORMAT_UINT; break;
    case TiffSample::UInt16: bits = 16; format = SAMPLEFORMAT_UINT; break;
    case TiffSample::Float32: break;
  }
  const auto width = static_cast<std::uint32_t>(raster.width());
  const auto height = static_cast<std::uint32_t>(raster.height());
  TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, width);
  TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, height);
  TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, std::uint16_t{1});
  TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, bits);
  TIFFSetField(tif.get(), TIFFTAG_SAMPLEFORMAT, format);
  TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
  TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
  TIFFSetField(tif.get(), TIFFTAG_COMPRESSION, COMPRESSION_NONE);
  TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, TIFFDefaultStripSize(tif.get(), 0));

  const std::size_t bytes = bits / 8;
  std::vector<unsigned char> line(static_cast<std::size_t>(width) * bytes);
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const float v = raster.at(static_cast<int>(x), static_cast<int>(y));
      unsigned char* p = line.data() + x * bytes;
      switch (sample) {
        case TiffSample::UInt8: *p = static_cast<std::uint8_t>(v); break;
        case TiffSample::UInt16: {
          const auto u = static_cast<std::uint16_t>(v);
          std::memcpy(p, &u, 2);
          break;
        }
        case TiffSample::Float32: std::memcpy(p, &v, 4); break;
      }
    }
    if (TIFFWriteScanline(tif.get(), line.data(), y, 0) < 0) {
      throw Error(Errc::Unwritable, path.string() + ": scanline " + std::to_string(y));
    }
  }
}

}  // namespace fg
