#pragma once

// Little-endian helpers for the FGPM and FGST containers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "fg/error.hpp"

namespace fg::binio {

inline void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

inline void put_floats(std::vector<char>& out, std::span<const float> values) {
  const std::size_t at = out.size();
  out.resize(at + 4 * values.size());
  char* dst = out.data() + at;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(dst, values.data(), 4 * values.size());
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto v = std::bit_cast<std::uint32_t>(values[i]);
      for (int b = 0; b < 4; ++b) dst[4 * i + b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
    }
  }
}

inline void get_floats(const char* src, std::span<float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(values.data(), src, 4 * values.size());
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::bit_cast<float>(get_u32(src + 4 * i));
  }
}

inline std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(Errc::Unreadable, path.string());
  const std::streamsize size = in.tellg();
  if (size < 0) throw Error(Errc::Unreadable, path.string());
  std::vector<char> bytes(static_cast<std::size_t>(size));
  in.seekg(0);
  if (!in.read(bytes.data(), size)) throw Error(Errc::Unreadable, path.string());
  return bytes;
}

}  // namespace fg::binio
