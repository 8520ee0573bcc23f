#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "fg/kernels.hpp"

namespace k = fg::kernels;

namespace {

constexpr int kSide = 256;
constexpr std::size_t kPixels = static_cast<std::size_t>(kSide) * kSide;

std::vector<float> random_plane(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(kPixels);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<std::uint8_t> random_mask(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(0.5);
  std::vector<std::uint8_t> v(kPixels);
  for (auto& x : v) x = b(rng) ? 1 : 0;
  return v;
}

template <bool Parallel>
void BM_Resize(benchmark::State& state) {
  const auto in = random_plane(1);
  std::vector<float> in85(85 * 85);
  std::copy_n(in.begin(), in85.size(), in85.begin());
  std::vector<float> out(kPixels);
  for (auto _ : state) {
    if constexpr (Parallel) k::parallel::resize_bilinear(in85, 85, 85, out, kSide, kSide);
    else k::serial::resize_bilinear(in85, 85, 85, out, kSide, kSide);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Nbr(benchmark::State& state) {
  const auto nir = random_plane(2);
  const auto swir = random_plane(3);
  std::vector<float> out(kPixels);
  const k::NbrRamp ramp;
  for (auto _ : state) {
    if constexpr (Parallel) k::parallel::nbr_probability(nir, swir, ramp, out);
    else k::serial::nbr_probability(nir, swir, ramp, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Mean(benchmark::State& state) {
  std::vector<std::vector<float>> storage;
  for (int i = 0; i < 11; ++i) storage.push_back(random_plane(10 + i));
  std::vector<std::span<const float>> planes(storage.begin(), storage.end());
  std::vector<float> out(kPixels);
  for (auto _ : state) {
    if constexpr (Parallel) k::parallel::mean(planes, out);
    else k::serial::mean(planes, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Erode(benchmark::State& state) {
  const auto in = random_mask(4);
  std::vector<std::uint8_t> out(kPixels);
  const std::vector<std::uint8_t> cells(9, 1);
  const k::Element se{cells, 3, 3};
  for (auto _ : state) {
    if constexpr (Parallel) k::parallel::erode(in, kSide, kSide, se, 0, out);
    else k::serial::erode(in, kSide, kSide, se, 0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Confusion(benchmark::State& state) {
  const auto a = random_mask(5);
  const auto b = random_mask(6);
  for (auto _ : state) {
    k::Counts c = Parallel ? k::parallel::confusion(a, b) : k::serial::confusion(a, b);
    benchmark::DoNotOptimize(c);
  }
}

}  // namespace

BENCHMARK(BM_Resize<false>)->Name("resize_bilinear/serial");
BENCHMARK(BM_Resize<true>)->Name("resize_bilinear/parallel");
BENCHMARK(BM_Nbr<false>)->Name("nbr_probability/serial");
BENCHMARK(BM_Nbr<true>)->Name("nbr_probability/parallel");
BENCHMARK(BM_Mean<false>)->Name("mean11/serial");
BENCHMARK(BM_Mean<true>)->Name("mean11/parallel");
BENCHMARK(BM_Erode<false>)->Name("erode3x3/serial");
BENCHMARK(BM_Erode<true>)->Name("erode3x3/parallel");
BENCHMARK(BM_Confusion<false>)->Name("confusion/serial");
BENCHMARK(BM_Confusion<true>)->Name("confusion/parallel");

BENCHMARK_MAIN();
