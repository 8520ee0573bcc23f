#include <omp.h>

#include <atomic>
#include <cstddef>

#include "fg/kernels.hpp"
#include "pixel_ops.hpp"

namespace fg::kernels {

namespace {
std::atomic<int> g_threads{0};

int team() {
  const int n = g_threads.load(std::memory_order_relaxed);
  return n > 0 ? n : omp_get_max_threads();
}
}  // namespace

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0, std::memory_order_relaxed); }
int thread_count() { return team(); }

namespace parallel {

void resize_bilinear(std::span<const float> in, int in_w, int in_h, std::span<float> out, int out_w,
                     int out_h) {
  const auto tx = detail::axis_taps(in_w, out_w);
  const auto ty = detail::axis_taps(in_h, out_h);
#pragma omp parallel for num_threads(team()) schedule(static)
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out[static_cast<std::size_t>(y) * out_w + x] = detail::bilinear_at(in, in_w, tx[x], ty[y]);
    }
  }
}

void normalize(std::span<const float> in, double lo, double hi, std::span<float> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for num_threads(team()) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::normalize_one(in[i], lo, hi);
}

void nbr_probability(std::span<const float> nir, std::span<const float> swir, const NbrRamp& ramp,
                     std::span<float> out) {
  const auto n = static_cast<std::ptrdiff_t>(nir.size());
#pragma omp parallel for num_threads(team()) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::nbr_probability_one(nir[i], swir[i], ramp);
}

void mean(std::span<const std::span<const float>> planes, std::span<float> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for num_threads(team()) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::mean_one(planes, static_cast<std::size_t>(i));
}

void threshold_above(std::span<const float> in, float t, std::span<std::uint8_t> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for num_threads(team()) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = in[i] > t ? 1 : 0;
}

std::size_t count_at_least(std::span<const float> in, float level) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  std::size_t count = 0;
#pragma omp parallel for num_threads(team()) schedule(static) reduction(+ : count)
  for (std::ptrdiff_t i = 0; i < n; ++i) count += in[i] >= level ? 1 : 0;
  return count;
}

void erode(std::span<const std::uint8_t> in, int w, int h, const Element& se, std::uint8_t border,
           std::span<std::uint8_t> out) {
#pragma omp parallel for num_threads(team()) schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out[static_cast<std::size_t>(y) * w + x] = detail::erode_one(in, w, h, se, border, x, y);
    }
  }
}

void dilate(std::span<const std::uint8_t> in, int w, int h, const Element& se, std::uint8_t border,
            std::span<std::uint8_t> out) {
#pragma omp parallel for num_threads(team()) schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out[static_cast<std::size_t>(y) * w + x] = detail::dilate_one(in, w, h, se, border, x, y);
    }
  }
}

Counts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth) {
  const auto n = static_cast<std::ptrdiff_t>(pred.size());
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
#pragma omp parallel for num_threads(team()) schedule(static) reduction(+ : tp, fp, fn, tn)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
    tn += !p && !t;
  }
  return {tp, fp, fn, tn};
}

}  // namespace parallel
}  // namespace fg::kernels
