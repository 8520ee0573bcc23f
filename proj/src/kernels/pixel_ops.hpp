#pragma once

// Per-pixel arithmetic shared by the serial and OpenMP kernels so that the
// two loops differ only in scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fg/kernels.hpp"

namespace fg::kernels::detail {

// Corner-aligned source position of one output coordinate along an axis.
struct Tap {
  int i0 = 0;
  int i1 = 0;
  double f = 0.0;
};

inline std::vector<Tap> axis_taps(int in_n, int out_n) {
  std::vector<Tap> taps(static_cast<std::size_t>(out_n));
  for (int o = 0; o < out_n; ++o) {
    const double s = out_n > 1 ? static_cast<double>(o) * (in_n - 1) / (out_n - 1) : 0.0;
    Tap& t = taps[static_cast<std::size_t>(o)];
    t.i0 = std::min(static_cast<int>(s), in_n - 1);
    t.i1 = std::min(t.i0 + 1, in_n - 1);
    t.f = s - t.i0;
  }
  return taps;
}

inline float bilinear_at(std::span<const float> in, int in_w, const Tap& tx, const Tap& ty) {
  auto px = [&](int xx, int yy) { return static_cast<double>(in[static_cast<std::size_t>(yy) * in_w + xx]); };
  const double top = std::lerp(px(tx.i0, ty.i0), px(tx.i1, ty.i0), tx.f);
  const double bottom = std::lerp(px(tx.i0, ty.i1), px(tx.i1, ty.i1), tx.f);
  return static_cast<float>(std::lerp(top, bottom, ty.f));
}

inline float normalize_one(float v, double lo, double hi) {
  if (!std::isfinite(v)) return 0.0f;
  const double t = (static_cast<double>(v) - lo) / (hi - lo);
  return static_cast<float>(std::clamp(t, 0.0, 1.0));
}

inline double normalized_difference(double a, double b) {
  const double sum = a + b;
  return sum == 0.0 ? 0.0 : (a - b) / sum;
}

inline float nbr_probability_one(float nir_n, float swir_n, const NbrRamp& r) {
  const double nir = std::max(0.0, r.nir_lo + nir_n * r.nir_scale);
  const double swir = std::max(0.0, r.swir_lo + swir_n * r.swir_scale);
  const double index = normalized_difference(nir, swir);
  const double p = (r.t_high - index) / (r.t_high - r.t_low);
  return static_cast<float>(std::clamp(p, 0.0, 1.0));
}

inline float mean_one(std::span<const std::span<const float>> planes, std::size_t i) {
  double sum = 0.0;
  for (const auto& plane : planes) sum += plane[i];
  return static_cast<float>(sum / static_cast<double>(planes.size()));
}

inline std::uint8_t sample(std::span<const std::uint8_t> in, int w, int h, int x, int y,
                           std::uint8_t border) {
  if (x < 0 || y < 0 || x >= w || y >= h) return border;
  return in[static_cast<std::size_t>(y) * w + x];
}

inline std::uint8_t erode_one(std::span<const std::uint8_t> in, int w, int h, const Element& se,
                              std::uint8_t border, int x, int y) {
  const int cx = se.width / 2;
  const int cy = se.height / 2;
  for (int j = 0; j < se.height; ++j) {
    for (int i = 0; i < se.width; ++i) {
      if (!se.cells[static_cast<std::size_t>(j) * se.width + i]) continue;
      if (!sample(in, w, h, x + i - cx, y + j - cy, border)) return 0;
    }
  }
  return 1;
}

// Dilation by M hits with the reflected element: offset (i - cx) is negated.
inline std::uint8_t dilate_one(std::span<const std::uint8_t> in, int w, int h, const Element& se,
                               std::uint8_t border, int x, int y) {
  const int cx = se.width / 2;
  const int cy = se.height / 2;
  for (int j = 0; j < se.height; ++j) {
    for (int i = 0; i < se.width; ++i) {
      if (!se.cells[static_cast<std::size_t>(j) * se.width + i]) continue;
      if (sample(in, w, h, x - (i - cx), y - (j - cy), border)) return 1;
    }
  }
  return 0;
}

}  // namespace fg::kernels::detail
