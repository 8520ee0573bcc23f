#include <doctest.h>

#include "fg/error.hpp"
#include "fg/morphology.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fg;

namespace {

bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.values()[i] > b.values()[i]) return false;
  }
  return true;
}

/// Random blobs plus salt noise, so opening has both structure and speckle to act on.
BinaryMask blobby(std::mt19937_64& rng, int side) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(side) * side, 0);
  std::uniform_int_distribution<int> pos(0, side - 1), size(1, 40), blobs(0, 12);
  const int n = blobs(rng);
  for (int b = 0; b < n; ++b) {
    const int x0 = pos(rng), y0 = pos(rng), w = size(rng), h = size(rng);
    for (int y = y0; y < std::min(side, y0 + h); ++y) {
      for (int x = x0; x < std::min(side, x0 + w); ++x) v[static_cast<std::size_t>(y) * side + x] = 1;
    }
  }
  std::bernoulli_distribution flip(0.02);
  for (auto& p : v) {
    if (flip(rng)) p ^= 1;
  }
  return BinaryMask(side, side, std::move(v));
}

}  // namespace

TEST_CASE("structuring element invariants") {
  const auto box = StructuringElement::box(3);
  CHECK(box.width() == 3);
  CHECK(box.cells() == std::vector<std::uint8_t>(9, 1));
  for (auto bad : {std::tuple{2, 3, std::vector<std::uint8_t>(6, 1)}, std::tuple{3, 3, std::vector<std::uint8_t>(8, 1)},
                   std::tuple{3, 3, std::vector<std::uint8_t>{1, 1, 1, 1, 0, 1, 1, 1, 1}},
                   std::tuple{1, 1, std::vector<std::uint8_t>{2}}, std::tuple{0, 0, std::vector<std::uint8_t>{}}}) {
    try {
      StructuringElement(std::get<0>(bad), std::get<1>(bad), std::get<2>(bad));
      FAIL("expected BadConfig");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::BadConfig);
    }
  }
  const StructuringElement l(3, 1, {1, 1, 0});
  CHECK(l.reflected().cells() == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(l.reflected().reflected() == l);
}

TEST_CASE("opening removes small objects and keeps the full image") {
  const auto se = StructuringElement::box(3);
  BinaryMask dot = BinaryMask::filled(256, 256, 0);
  {
    std::vector<std::uint8_t> v(dot.values().begin(), dot.values().end());
    v[100 * 256 + 37] = 1;
    dot = BinaryMask(256, 256, v);
  }
  CHECK(open(dot, se).count_ones() == 0);

  const auto ones = BinaryMask::filled(256, 256, 1);
  const auto eroded = erode(ones, se);
  CHECK(eroded.count_ones() == 254u * 254u);  // zero padding strips the border
  CHECK(eroded.at(0, 0) == 0);
  CHECK(eroded.at(1, 1) == 1);
  CHECK(open(ones, se) == ones);
  CHECK(erode(ones, se, Padding::Ones) == ones);

  for (int y0 : {0, 17, 254}) {
    for (int x0 : {0, 100, 254}) {
      std::vector<std::uint8_t> v(256 * 256, 0);
      for (int y = y0; y < y0 + 2; ++y) {
        for (int x = x0; x < x0 + 2; ++x) v[y * 256 + x] = 1;
      }
      CHECK(open(BinaryMask(256, 256, v), se).count_ones() == 0);
    }
  }

  // a 3x3 block survives intact
  std::vector<std::uint8_t> v(256 * 256, 0);
  for (int y = 10; y < 13; ++y) {
    for (int x = 20; x < 23; ++x) v[y * 256 + x] = 1;
  }
  const BinaryMask block(256, 256, v);
  CHECK(open(block, se) == block);
}

TEST_CASE("erode and dilate match the definitional oracle") {
  std::mt19937_64 rng(3);
  const std::vector<StructuringElement> elements = {
      StructuringElement::box(3), StructuringElement::box(5), StructuringElement(3, 1, {1, 1, 0}),
      StructuringElement(3, 3, {0, 1, 0, 1, 1, 1, 0, 1, 0}), StructuringElement(5, 3, {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1})};
  for (const auto& se : elements) {
    for (int n = 0; n < 5; ++n) {
      const BinaryMask img = fgtest::random_binary(rng, 40, 33, 0.6);
      CHECK(erode(img, se) == oracle::erode(img, se.cells(), se.width(), se.height()));
      CHECK(dilate(img, se) == oracle::dilate(img, se.cells(), se.width(), se.height()));
    }
  }
}

TEST_CASE("opening is anti-extensive and idempotent on 500 random masks; duality holds") {
  std::mt19937_64 rng(500);
  const auto se = StructuringElement::box(3);
  const StructuringElement odd(3, 3, {1, 1, 0, 0, 1, 0, 0, 1, 1});
  for (int n = 0; n < 500; ++n) {
    const BinaryMask img = blobby(rng, 256);
    const BinaryMask o = open(img, se);
    REQUIRE(subset(o, img));
    REQUIRE(open(o, se) == o);
    if (n % 10 == 0) {
      REQUIRE(dilate(img, odd) == complement(erode(complement(img), odd.reflected(), Padding::Ones)));
      REQUIRE(erode(img, odd) == complement(dilate(complement(img), odd.reflected(), Padding::Ones)));
      const BinaryMask oo = open(img, odd);
      REQUIRE(subset(oo, img));
      REQUIRE(open(oo, odd) == oo);
    }
  }
}
