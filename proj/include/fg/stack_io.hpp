#pragma once

#include <filesystem>

#include "fg/preprocess.hpp"

namespace fg {

// Preprocessed stacks on disk: "<id>.fgst" holds "FGST", u32 version=1,
// u32 width, u32 height, u32 channels, then channel-major float32 LE.
// "<id>.json" next to it carries satellite, bands, lon, lat, year, month, day.

std::filesystem::path write_stack(const ImageStack& stack, const std::filesystem::path& dir);
ImageStack read_stack(const std::filesystem::path& fgst_path);

}  // namespace fg
