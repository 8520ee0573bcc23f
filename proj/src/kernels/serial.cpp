#include <cstddef>

#include "fg/kernels.hpp"
#include "pixel_ops.hpp"

namespace fg::kernels::serial {

void resize_bilinear(std::span<const float> in, int in_w, int in_h, std::span<float> out, int out_w,
                     int out_h) {
  const auto tx = detail::axis_taps(in_w, out_w);
  const auto ty = detail::axis_taps(in_h, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out[static_cast<std::size_t>(y) * out_w + x] = detail::bilinear_at(in, in_w, tx[x], ty[y]);
    }
  }
}

void normalize(std::span<const float> in, double lo, double hi, std::span<float> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = detail::normalize_one(in[i], lo, hi);
}

void nbr_probability(std::span<const float> nir, std::span<const float> swir, const NbrRamp& ramp,
                     std::span<float> out) {
  for (std::size_t i = 0; i < nir.size(); ++i) out[i] = detail::nbr_probability_one(nir[i], swir[i], ramp);
}

void mean(std::span<const std::span<const float>> planes, std::span<float> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::mean_one(planes, i);
}

void threshold_above(std::span<const float> in, float t, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > t ? 1 : 0;
}

std::size_t count_at_least(std::span<const float> in, float level) {
  std::size_t n = 0;
  for (float v : in) n += v >= level ? 1 : 0;
  return n;
}

void erode(std::span<const std::uint8_t> in, int w, int h, const Element& se, std::uint8_t border,
           std::span<std::uint8_t> out) {
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out[static_cast<std::size_t>(y) * w + x] = detail::erode_one(in, w, h, se, border, x, y);
    }
  }
}

void dilate(std::span<const std::uint8_t> in, int w, int h, const Element& se, std::uint8_t border,
            std::span<std::uint8_t> out) {
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out[static_cast<std::size_t>(y) * w + x] = detail::dilate_one(in, w, h, se, border, x, y);
    }
  }
}

Counts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth) {
  Counts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace fg::kernels::serial
