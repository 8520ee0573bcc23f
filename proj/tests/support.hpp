#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "fg/raster.hpp"

namespace fgtest {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "fg") {
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate = fs::temp_directory_path() / (tag + "-" + std::to_string(rd()));
      if (fs::create_directory(candidate)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string slurp_text(const fs::path& p) {
  const auto bytes = slurp(p);
  return {bytes.begin(), bytes.end()};
}

inline void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

/// FNV-1a over the relative path and contents of every regular file, in path order.
inline std::uint64_t tree_hash(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 1099511628211ull;
    }
  };
  for (const auto& f : files) {
    const std::string rel = fs::relative(f, root).generic_string();
    feed(rel.data(), rel.size());
    const auto bytes = slurp(f);
    feed(bytes.data(), bytes.size());
  }
  return h;
}

inline fg::BinaryMask random_binary(std::mt19937_64& rng, int w, int h, double p = 0.5) {
  std::bernoulli_distribution b(p);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = b(rng) ? 1 : 0;
  return fg::BinaryMask(w, h, std::move(v));
}

inline fg::ProbabilityMask random_probability(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = u(rng);
  return fg::ProbabilityMask(w, h, std::move(v));
}

inline fg::BinaryMask mask_from_rows(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  std::vector<std::uint8_t> v;
  for (const auto& r : rows) {
    for (char c : r) v.push_back(c == '1' ? 1 : 0);
  }
  return fg::BinaryMask(w, h, std::move(v));
}

}  // namespace fgtest
