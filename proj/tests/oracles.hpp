#pragma once

// Reference computations written without reuse of library code, used to
// check the library on random inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fg/raster.hpp"

namespace oracle {

struct Confusion {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Visits every pixel by coordinates.
inline Confusion confusion(const fg::BinaryMask& pred, const fg::BinaryMask& truth) {
  Confusion c;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred.at(x, y) == 1;
      const bool t = truth.at(x, y) == 1;
      if (p && t) ++c.tp;
      else if (p && !t) ++c.fp;
      else if (!p && t) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

inline long double accuracy(const Confusion& c) {
  return static_cast<long double>(c.tp + c.tn) / static_cast<long double>(c.tp + c.fp + c.fn + c.tn);
}
inline long double f1(const Confusion& c) {
  if (c.tp + c.fp + c.fn == 0) return 1.0L;
  return 2.0L * c.tp / static_cast<long double>(2 * c.tp + c.fp + c.fn);
}
inline long double iou(const Confusion& c) {
  if (c.tp + c.fp + c.fn == 0) return 1.0L;
  return static_cast<long double>(c.tp) / static_cast<long double>(c.tp + c.fp + c.fn);
}

/// One sigma pass over `idx` (indices into `r`), extended precision,
/// inclusive boundary with the library's documented 1e-12 slack.
inline std::vector<std::size_t> sigma_pass(const std::vector<double>& r, const std::vector<std::size_t>& idx,
                                           double k, bool sample = false) {
  if (idx.empty()) return {};
  long double mu = 0.0L;
  for (std::size_t i : idx) mu += r[i];
  mu /= static_cast<long double>(idx.size());
  long double var = 0.0L;
  for (std::size_t i : idx) var += (r[i] - mu) * (r[i] - mu);
  const long double denom = sample ? static_cast<long double>(idx.size()) - 1.0L : static_cast<long double>(idx.size());
  const long double sd = denom > 0.0L ? std::sqrt(var / denom) : 0.0L;
  std::vector<std::size_t> keep;
  for (std::size_t i : idx) {
    if (std::fabs(r[i] - mu) <= k * sd + 1e-12L) keep.push_back(i);
  }
  return keep;
}

struct TwoStage {
  std::vector<std::size_t> after1;
  std::vector<std::size_t> after2;
};

inline TwoStage two_stage(const std::vector<double>& r, double k1, double k2) {
  std::vector<std::size_t> all(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) all[i] = i;
  TwoStage t;
  t.after1 = sigma_pass(r, all, k1);
  t.after2 = sigma_pass(r, t.after1, k2);
  return t;
}

/// Brute-force search for 11-vectors {0.0, 0.647, 0.671} + eight values
/// from {lo, lo+0.01, ..., hi} (as a multiset) whose two-stage outcome
/// removes exactly 0.0 at k=3 and exactly 0.647 and 0.671 at k=1.
inline std::vector<std::vector<double>> eleven_ratio_hits(int lo_centi = 55, int hi_centi = 64) {
  std::vector<std::vector<double>> hits;
  const int span = hi_centi - lo_centi + 1;
  std::vector<int> pick(8, 0);  // non-decreasing offsets into the grid
  for (;;) {
    std::vector<double> r = {0.0, 0.647, 0.671};
    for (int p : pick) r.push_back((lo_centi + p) / 100.0);
    const TwoStage t = two_stage(r, 3.0, 1.0);
    const bool stage1 = t.after1.size() == 10 && std::find(t.after1.begin(), t.after1.end(), 0) == t.after1.end();
    const bool stage2 = t.after2.size() == 8 && std::find(t.after2.begin(), t.after2.end(), 1) == t.after2.end() &&
                        std::find(t.after2.begin(), t.after2.end(), 2) == t.after2.end();
    if (stage1 && stage2) hits.push_back(r);
    int i = 7;
    while (i >= 0 && pick[i] == span - 1) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < 8; ++j) pick[j] = pick[i];
  }
  return hits;
}

inline double nbr(double nir, double swir) {
  const long double s = static_cast<long double>(nir) + swir;
  return s == 0.0L ? 0.0 : static_cast<double>((static_cast<long double>(nir) - swir) / s);
}

/// Erosion by definition: every set offset of `se` (w x h, centered) hits a 1, zero padding.
inline fg::BinaryMask erode(const fg::BinaryMask& img, const std::vector<std::uint8_t>& se, int w, int h) {
  std::vector<std::uint8_t> out(img.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      bool all = true;
      for (int j = 0; j < h && all; ++j) {
        for (int i = 0; i < w && all; ++i) {
          if (!se[static_cast<std::size_t>(j) * w + i]) continue;
          const int xx = x + i - w / 2, yy = y + j - h / 2;
          const bool inside = xx >= 0 && yy >= 0 && xx < img.width() && yy < img.height();
          if (!inside || !img.at(xx, yy)) all = false;
        }
      }
      out[static_cast<std::size_t>(y) * img.width() + x] = all ? 1 : 0;
    }
  }
  return fg::BinaryMask(img.width(), img.height(), std::move(out));
}

/// Dilation as the union of translates of the image by each set offset.
inline fg::BinaryMask dilate(const fg::BinaryMask& img, const std::vector<std::uint8_t>& se, int w, int h) {
  std::vector<std::uint8_t> out(img.size(), 0);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (!se[static_cast<std::size_t>(j) * w + i]) continue;
      const int dx = i - w / 2, dy = j - h / 2;
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
          if (!img.at(x, y)) continue;
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < img.width() && yy < img.height()) {
            out[static_cast<std::size_t>(yy) * img.width() + xx] = 1;
          }
        }
      }
    }
  }
  return fg::BinaryMask(img.width(), img.height(), std::move(out));
}

}  // namespace oracle
