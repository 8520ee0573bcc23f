#pragma once

// Data-parallel inner loops behind the pipeline stages. Every kernel exists
// twice with identical signatures: `serial` is the plain reference used by
// the equivalence tests, `parallel` is the OpenMP version the library calls.
// Both must produce bit-identical output for the same input.

#include <cstddef>
#include <cstdint>
#include <span>

namespace fg::kernels {

struct Counts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  bool operator==(const Counts&) const = default;
};

/// Ramp parameters for the index segmenter. Channel values are de-normalized
/// as `lo + v * scale` before NBR is taken.
struct NbrRamp {
  double nir_lo = 0.0;
  double nir_scale = 1.0;
  double swir_lo = 0.0;
  double swir_scale = 1.0;
  double t_low = 0.1;
  double t_high = 0.3;
};

/// Binary structuring element, odd dimensions, anchored at its center.
struct Element {
  std::span<const std::uint8_t> cells;
  int width = 0;
  int height = 0;
};

#define FG_KERNEL_DECLS                                                                          \
  void resize_bilinear(std::span<const float> in, int in_w, int in_h, std::span<float> out,      \
                       int out_w, int out_h);                                                    \
  void normalize(std::span<const float> in, double lo, double hi, std::span<float> out);        \
  void nbr_probability(std::span<const float> nir, std::span<const float> swir,                \
                       const NbrRamp& ramp, std::span<float> out);                               \
  void mean(std::span<const std::span<const float>> planes, std::span<float> out);             \
  void threshold_above(std::span<const float> in, float t, std::span<std::uint8_t> out);       \
  std::size_t count_at_least(std::span<const float> in, float level);                           \
  void erode(std::span<const std::uint8_t> in, int w, int h, const Element& se,                \
             std::uint8_t border, std::span<std::uint8_t> out);                                 \
  void dilate(std::span<const std::uint8_t> in, int w, int h, const Element& se,               \
              std::uint8_t border, std::span<std::uint8_t> out);                                \
  Counts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth);

namespace serial {
FG_KERNEL_DECLS
}  // namespace serial

namespace parallel {
FG_KERNEL_DECLS
}  // namespace parallel

#undef FG_KERNEL_DECLS

/// Caps the OpenMP team size used by `parallel` kernels; n <= 0 restores the default.
void set_thread_count(int n);
int thread_count();

}  // namespace fg::kernels
