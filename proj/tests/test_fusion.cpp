#include <doctest.h>

#include <json.hpp>

#include "fg/error.hpp"
#include "fg/fusion.hpp"
#include "fg/metrics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fg;

namespace {

const GridCoord kLon = GridCoord::from_centi(-5480);
const GridCoord kLat = GridCoord::from_centi(-367);

const Query kQuery{kLon, kLat, 2020, 8, "-54.80", "-3.67"};

/// Frozen from the brute-force search below (grid 0.55..0.64 step 0.01).
const std::vector<double> kElevenRatios = {0.62, 0.647, 0.61, 0.0, 0.63, 0.61, 0.671, 0.62, 0.61, 0.62, 0.61};

/// A 256x256 prediction whose first round(ratio * 65536) pixels, row-major,
/// are 1 and the rest 0.
Prediction prediction_with_ratio(double ratio, int day, const std::string& source = "index") {
  const auto ones = static_cast<std::size_t>(std::llround(ratio * 65536.0));
  std::vector<float> v(65536, 0.0f);
  std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ones), 1.0f);
  PredictionMeta m;
  m.satellite = Satellite::Sentinel2;
  m.lon = kLon;
  m.lat = kLat;
  m.date = {2020, 8, day};
  m.band_set = {"B4", "B7", "B8", "B11", "B12"};
  m.source = source;
  m.id = acquisition_id(m.satellite, kLon, kLat, m.date);
  return Prediction(ProbabilityMask(256, 256, std::move(v)), std::move(m));
}

std::vector<double> pick(const std::vector<double>& r, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  for (std::size_t i : idx) out.push_back(r[i]);
  return out;
}

}  // namespace

TEST_CASE("sigma_filter worked examples") {
  const std::vector<double> same(6, 0.3);
  CHECK(sigma_filter(same, 3.0).retained.size() == 6);
  CHECK(sigma_filter(same, 3.0).sigma == 0.0);

  std::vector<double> r(14, 0.40);
  r.push_back(0.0);
  const auto res = sigma_filter(r, 3.0);
  CHECK(res.mean == doctest::Approx(0.373333).epsilon(1e-5));
  CHECK(res.sigma == doctest::Approx(0.09978).epsilon(1e-4));
  CHECK(res.retained.size() == 14);
  CHECK(std::find(res.retained.begin(), res.retained.end(), 14) == res.retained.end());

  const std::vector<double> three = {0.3, 0.4, 0.5};
  const auto one = sigma_filter(three, 1.0);
  CHECK(one.sigma == doctest::Approx(0.0816497).epsilon(1e-6));
  CHECK(one.retained == std::vector<std::size_t>{1});

  // sample sigma is wider: sqrt(0.01) = 0.1 keeps the +-0.1 ends under the inclusive rule
  CHECK(sigma_filter(three, 1.0, StdMode::Sample).retained.size() == 3);
  CHECK(sigma_filter(three, 1.0, StdMode::Sample, Boundary::Exclusive).retained == std::vector<std::size_t>{1});
  CHECK(sigma_filter(same, 3.0, StdMode::Population, Boundary::Exclusive).retained.empty());
  CHECK(sigma_filter(std::vector<double>{0.2}, 1.0, StdMode::Sample).retained.size() == 1);

  // two values always sit exactly one sigma out; both stay
  for (auto [a, b] : {std::pair{0.1, 0.7}, std::pair{0.3, 0.30000000000000004}, std::pair{0.0, 0.9999}}) {
    CHECK(sigma_filter(std::vector<double>{a, b}, 1.0).retained.size() == 2);
  }

  try {
    sigma_filter(std::vector<double>{}, 3.0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyInput);
  }
}

TEST_CASE("two_stage_filter matches the two-pass oracle on 1000 random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution outlier(0.3);
  const FusionConfig cfg;
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> r(static_cast<std::size_t>(len(rng)));
    const double centre = u(rng);
    for (auto& x : r) x = outlier(rng) ? u(rng) : std::clamp(centre + 0.05 * (u(rng) - 0.5), 0.0, 1.0);
    const TwoStageResult got = two_stage_filter(r, cfg);
    const oracle::TwoStage want = oracle::two_stage(r, 3.0, 1.0);
    REQUIRE(got.stage1.retained == want.after1);
    REQUIRE(got.retained == want.after2);
    REQUIRE(got.removed_stage1.size() + got.removed_stage2.size() + got.retained.size() == r.size());
  }
}

TEST_CASE("k = 3 removes nothing for n <= 9") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 9; ++n) {
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> r(static_cast<std::size_t>(n));
      for (auto& x : r) x = u(rng);
      if (t % 3 == 0) r[0] = 0.0;  // extreme: one zero against tightly packed values
      if (t % 3 == 0) {
        for (std::size_t i = 1; i < r.size(); ++i) r[i] = 0.9 + 1e-6 * u(rng);
      }
      REQUIRE(sigma_filter(r, 3.0).retained.size() == r.size());
    }
  }
}

TEST_CASE("brute-force search reproduces the frozen 11-prediction fixture") {
  const auto hits = oracle::eleven_ratio_hits();
  CHECK(hits.size() == 2470);
  std::vector<double> frozen = kElevenRatios;
  std::sort(frozen.begin(), frozen.end());
  bool found = false;
  for (auto h : hits) {
    std::sort(h.begin(), h.end());
    if (h == frozen) found = true;
  }
  CHECK(found);
}

TEST_CASE("the 11-prediction fixture traces 11 -> 10 -> 8") {
  const FusionConfig cfg;
  const TwoStageResult t = two_stage_filter(kElevenRatios, cfg);
  CHECK(t.removed_stage1 == std::vector<std::size_t>{3});
  CHECK(pick(kElevenRatios, t.removed_stage2) == std::vector<double>{0.647, 0.671});
  CHECK(t.retained.size() == 8);

  std::vector<Prediction> preds;
  for (std::size_t i = 0; i < kElevenRatios.size(); ++i) preds.push_back(prediction_with_ratio(kElevenRatios[i], static_cast<int>(i) + 1));
  const FusionResult f = fuse_query(kQuery, preds, cfg);
  CHECK(f.report.candidates == 11);
  CHECK(f.report.candidates - f.report.removed_stage1.size() == 10);
  CHECK(f.report.retained == 8);
  CHECK(f.report.output == "deforestation_-54.80_-3.67_2020_08.png");
  for (std::size_t i = 0; i < kElevenRatios.size(); ++i) CHECK(f.report.ratios[i] == doctest::Approx(kElevenRatios[i]).epsilon(1e-4));

  // hand-staged composition
  std::vector<ProbabilityMask> survivors;
  for (std::size_t i : t.retained) survivors.push_back(preds[i].mask());
  const BinaryMask manual = open(binarize(average_masks(survivors), 0.40), StructuringElement::box(3));
  CHECK(f.mask == manual);
}

TEST_CASE("average_masks and binarize") {
  const auto z = ProbabilityMask::filled(256, 256, 0.0f);
  const auto o = ProbabilityMask::filled(256, 256, 1.0f);
  CHECK(average_masks(std::vector<ProbabilityMask>{z}) == z);
  CHECK(average_masks(std::vector<ProbabilityMask>{z, o}) == ProbabilityMask::filled(256, 256, 0.5f));

  std::mt19937_64 rng(11);
  std::vector<ProbabilityMask> seven;
  for (int i = 0; i < 7; ++i) seven.push_back(fgtest::random_probability(rng, 64, 64));
  const auto avg = average_masks(seven);
  for (std::size_t p = 0; p < avg.size(); ++p) {
    long double s = 0.0L;
    for (const auto& m : seven) s += m.values()[p];
    REQUIRE(std::abs(static_cast<long double>(avg.values()[p]) - s / 7.0L) <= 1e-6L);
  }
  try {
    average_masks(std::vector<ProbabilityMask>{z, ProbabilityMask::filled(2, 2, 0.0f)});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }

  CHECK(binarize(ProbabilityMask::filled(256, 256, 0.40f), 0.40).count_ones() == 0);
  CHECK(binarize(ProbabilityMask::filled(256, 256, 0.41f), 0.40).count_ones() == 65536);
  const auto rnd = fgtest::random_probability(rng, 256, 256);
  const auto b = binarize(rnd, 0.4);
  for (std::size_t p = 0; p < rnd.size(); ++p) REQUIRE(b.values()[p] == (rnd.values()[p] > 0.4f ? 1 : 0));
  const auto hi = binarize(rnd, 0.7);
  for (std::size_t p = 0; p < rnd.size(); ++p) REQUIRE(hi.values()[p] <= b.values()[p]);
}

TEST_CASE("fuse_query edge cases") {
  const FusionConfig cfg;
  const FusionResult one = fuse_query(kQuery, std::vector<Prediction>{prediction_with_ratio(0.0, 1)}, cfg);
  CHECK(one.mask.count_ones() == 0);
  CHECK(one.report.retained == 1);

  try {
    fuse_query(kQuery, std::vector<Prediction>{}, cfg);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoData);
  }
  Query elsewhere = kQuery;
  elsewhere.month = 9;
  try {
    fuse_query(elsewhere, std::vector<Prediction>{prediction_with_ratio(0.2, 1)}, cfg);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MixedDates);
  }
  FusionConfig bad;
  bad.k2 = 4.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = FusionConfig{};
  bad.pixel_threshold = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("fusion order does not depend on input order") {
  std::vector<Prediction> preds;
  for (int i = 0; i < 9; ++i) preds.push_back(prediction_with_ratio(0.3 + 0.001 * i, i + 1, i % 2 ? "a" : "b"));
  const FusionResult a = fuse_query(kQuery, preds, FusionConfig{});
  std::reverse(preds.begin(), preds.end());
  const FusionResult b = fuse_query(kQuery, preds, FusionConfig{});
  CHECK(a.mask == b.mask);
  CHECK(a.report.retained == b.report.retained);
}

TEST_CASE("filtering an all-black outlier beats naive averaging") {
  std::mt19937_64 rng(21);
  // ground truth: a disc of radius 60
  std::vector<std::uint8_t> truth_v(65536);
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) truth_v[y * 256 + x] = (x - 128) * (x - 128) + (y - 128) * (y - 128) <= 3600;
  }
  const BinaryMask truth(256, 256, truth_v);
  std::normal_distribution<float> noise(0.0f, 0.15f);
  std::vector<Prediction> preds;
  for (int k = 0; k < 5; ++k) {
    std::vector<float> v(65536);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp((truth_v[i] ? 0.65f : 0.25f) + noise(rng), 0.0f, 1.0f);
    PredictionMeta m = prediction_with_ratio(0.0, k + 1).meta();
    preds.emplace_back(ProbabilityMask(256, 256, std::move(v)), m);
  }
  preds.emplace_back(ProbabilityMask::filled(256, 256, 0.0f), prediction_with_ratio(0.0, 20).meta());
  const FusionConfig cfg;
  const FusionResult fused = fuse_query(kQuery, preds, cfg);
  CHECK(fused.report.retained == 5);
  std::vector<ProbabilityMask> all;
  for (const auto& p : preds) all.push_back(p.mask());
  const BinaryMask naive = open(binarize(average_masks(all), cfg.pixel_threshold), cfg.structuring_element);
  const double filtered_iou = iou(confusion(fused.mask, truth));
  const double naive_iou = iou(confusion(naive, truth));
  CHECK(filtered_iou >= naive_iou);
  CHECK(filtered_iou > 0.9);
}

TEST_CASE("report JSON") {
  std::vector<Prediction> preds;
  for (std::size_t i = 0; i < kElevenRatios.size(); ++i) preds.push_back(prediction_with_ratio(kElevenRatios[i], static_cast<int>(i) + 1));
  const auto j = nlohmann::json::parse(report_to_json(fuse_query(kQuery, preds, FusionConfig{}).report));
  CHECK(j["candidates"] == 11);
  CHECK(j["retained"] == 8);
  CHECK(j["removed_stage1"].size() == 1);
  CHECK(j["removed_stage2"].size() == 2);
  CHECK(j["query"]["lon"] == "-54.80");
  CHECK(j["std_mode"] == "population");
  CHECK(j["boundary"] == "inclusive");
  CHECK(j["ids"][0] == "Sentinel2_-54.80_-3.67_2020_08_01");
}
