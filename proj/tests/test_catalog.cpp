#include <doctest.h>

#include <set>

#include "fg/catalog.hpp"
#include "fg/error.hpp"
#include "fg/preprocess.hpp"
#include "support.hpp"

using namespace fg;
using fgtest::TempDir;
namespace fs = std::filesystem;

namespace {

template <class Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected fg::Error");
  return Errc::Unreadable;
}

GridCoord g(const char* s) { return *GridCoord::parse(s); }

void touch(const fs::path& p) {
  fs::create_directories(p.parent_path());
  fgtest::spit(p, "");
}

/// Writes empty files for every selected band of one acquisition.
void touch_acquisition(const fs::path& dir, Satellite sat, const char* lon, const char* lat, int y, int m, int d) {
  for (const auto& band : select_bands(sat)) {
    TileRecord r{sat, band, g(lon), g(lat), {y, m, d}, {}, TileKind::Imagery};
    touch(dir / format_filename(r));
  }
}

Query query(const char* lon, const char* lat, int y, int m) { return {g(lon), g(lat), y, m, lon, lat}; }

}  // namespace

TEST_CASE("parse_filename: imagery, label, excluded, malformed") {
  const TileRecord r = parse_filename("Sentinel2_B4_-54.80_-3.67_2020_08_15.tiff");
  CHECK(r.satellite == Satellite::Sentinel2);
  CHECK(r.band == "B4");
  CHECK(r.lon == g("-54.80"));
  CHECK(r.lat == g("-3.67"));
  CHECK(r.date == Date{2020, 8, 15});
  CHECK(r.kind == TileKind::Imagery);

  const TileRecord l = parse_filename("Deforestation_-54.80_-3.67_2020_08.tiff");
  CHECK(l.kind == TileKind::Label);
  CHECK_FALSE(l.satellite.has_value());
  CHECK(l.band.empty());
  CHECK(l.date == Date{2020, 8, 0});

  CHECK(code_of([] { parse_filename("Landsat5_B1_-54.80_-3.67_2010_01_05.tiff"); }) == Errc::ExcludedCollection);
  CHECK(code_of([] { parse_filename("Modis_B1_-54.80_-3.67_2010_01_05.tiff"); }) == Errc::UnknownCollection);
  for (const char* bad : {"Sentinel2_B4_-54.80_-3.67_2020_08_15.png", "Sentinel2_B4_-54.80_-3.67_2020_08.tiff",
                          "Sentinel2_B4_-54.80_-3.67_2020_13_01.tiff", "Sentinel2_B4_-54.80_-3.67_2021_02_29.tiff",
                          "Sentinel2_B4_-254.80_-3.67_2020_08_15.tiff", "Sentinel2_B4_-54.80_-93.67_2020_08_15.tiff",
                          "Sentinel2_B4_x_-3.67_2020_08_15.tiff", "Sentinel2_B4_-54.80_-3.67_20_08_15.tiff",
                          "Deforestation_-54.80_-3.67_2020_08_01.tiff", "notes.txt"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_filename(bad); }) == Errc::BadFilename);
  }
  CHECK(parse_filename("Sentinel2_B4_-54.80_-3.67_2020_02_29.tif").date == Date{2020, 2, 29});
  CHECK(parse_filename("a/b/Sentinel1_VV_1.5_2_2020_8_1.tiff").path == fs::path("a/b/Sentinel1_VV_1.5_2_2020_8_1.tiff"));
}

TEST_CASE("format_filename inverts parse_filename") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> lon(-18000, 18000), lat(-9000, 9000), year(1990, 2030), month(1, 12),
      day(1, 28), sat(0, 3);
  for (int i = 0; i < 2000; ++i) {
    TileRecord r;
    const int s = sat(rng);
    r.lon = GridCoord::from_centi(lon(rng));
    r.lat = GridCoord::from_centi(lat(rng));
    if (s == 3) {
      r.kind = TileKind::Label;
      r.date = {year(rng), month(rng), 0};
    } else {
      r.satellite = static_cast<Satellite>(s);
      const auto& bands = select_bands(*r.satellite);
      r.band = bands[static_cast<std::size_t>(i) % bands.size()];
      r.date = {year(rng), month(rng), day(rng)};
    }
    const std::string name = format_filename(r);
    r.path = name;
    REQUIRE(parse_filename(name) == r);
  }
}

TEST_CASE("configurable grammar") {
  FilenameGrammar gr;
  gr.separator = "-";
  gr.fields = {"year", "month", "day", "collection", "band", "lon", "lat"};
  gr.label_collection = "Labels";
  const TileRecord r = parse_filename("2020-08-15-Sentinel2-B8-10.5-20.25.tiff", gr);
  CHECK(r.satellite == Satellite::Sentinel2);
  CHECK(r.band == "B8");
  CHECK(r.lon == g("10.5"));
  CHECK(r.date == Date{2020, 8, 15});
  const TileRecord l = parse_filename("2020-08-Labels-10.50-20.25.tiff", gr);
  CHECK(l.kind == TileKind::Label);
  CHECK(format_filename(l, gr) == "2020-08-Labels-10.50-20.25.tiff");
}

TEST_CASE("build_catalog: empty dir, junk, determinism, unreadable root") {
  TempDir dir;
  Catalog empty = build_catalog(dir.path());
  CHECK(empty.records().empty());
  CHECK(empty.skipped().empty());

  touch(dir / "z/Sentinel2_B4_-54.80_-3.67_2020_08_15.tiff");
  touch(dir / "a/Sentinel1_VV_-54.80_-3.67_2020_08_15.tiff");
  touch(dir / "Deforestation_-54.80_-3.67_2020_08.tiff");
  touch(dir / "junk.txt");
  Catalog c = build_catalog(dir.path());
  CHECK(c.records().size() == 3);
  REQUIRE(c.skipped().size() == 1);
  CHECK(c.skipped()[0].find("junk.txt") != std::string::npos);
  CHECK(std::is_sorted(c.records().begin(), c.records().end(),
                       [](const TileRecord& a, const TileRecord& b) { return a.path < b.path; }));
  CHECK(c.at({g("-54.80"), g("-3.67"), 2020, 8}).size() == 3);
  CHECK(c.at({g("-54.80"), g("-3.67"), 2020, 9}).empty());

  CHECK(build_catalog(dir.path()).records() == c.records());
  CHECK(code_of([&] { build_catalog(dir / "nope"); }) == Errc::Unreadable);
  CHECK(code_of([] { Catalog({TileRecord{.path = "x"}, TileRecord{.path = "x"}}); }) == Errc::BadFilename);
}

TEST_CASE("catalog JSON round trip") {
  TempDir dir;
  touch_acquisition(dir / "t", Satellite::Landsat8, "-54.80", "-3.67", 2020, 8, 3);
  touch(dir / "t/Deforestation_-54.80_-3.67_2020_08.tiff");
  touch(dir / "t/readme.md");
  const Catalog c = build_catalog(dir / "t");
  save_catalog(c, dir / "catalog.json");
  const Catalog back = load_catalog(dir / "catalog.json");
  CHECK(back.records() == c.records());
  CHECK(back.skipped() == c.skipped());
  const std::string text = fgtest::slurp_text(dir / "catalog.json");
  CHECK(text.find("\"records\"") != std::string::npos);
  CHECK(text.find("\"skipped\"") != std::string::npos);
  CHECK(text.find("\"-54.80\"") != std::string::npos);
}

TEST_CASE("pair_training counts complete dates only") {
  TempDir dir;
  touch(dir / "Deforestation_-54.80_-3.67_2020_08.tiff");
  touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.80", "-3.67", 2020, 8, 3);
  touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.80", "-3.67", 2020, 8, 15);
  // an incomplete date: B11 missing
  for (const char* b : {"B4", "B7", "B8", "B12"}) {
    touch(dir / (std::string("Sentinel2_") + b + "_-54.80_-3.67_2020_08_20.tiff"));
  }
  // imagery of another month and location is not paired
  touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.80", "-3.67", 2020, 9, 3);
  touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.81", "-3.67", 2020, 8, 3);

  const PairingResult p = pair_training(build_catalog(dir.path()));
  REQUIRE(p.pairs.size() == 2);
  CHECK(p.incomplete_dates == 1);
  for (const auto& pair : p.pairs) {
    CHECK(pair.label.kind == TileKind::Label);
    REQUIRE(pair.stack_source.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(pair.stack_source[i].band == select_bands(Satellite::Sentinel2)[i]);
    CHECK(pair.stack_source[0].date.month == 8);
  }

  TempDir lonely;
  touch(lonely / "Deforestation_-54.80_-3.67_2020_08.tiff");
  CHECK(pair_training(build_catalog(lonely.path())).pairs.empty());
}

TEST_CASE("resolve_query: the 11-candidate month (2 Land8 + 3 Sen1 + 6 Sen2)") {
  TempDir dir;
  for (int d : {4, 20}) touch_acquisition(dir.path(), Satellite::Landsat8, "-54.80", "-3.67", 2020, 8, d);
  for (int d : {2, 14, 26}) touch_acquisition(dir.path(), Satellite::Sentinel1, "-54.80", "-3.67", 2020, 8, d);
  for (int d : {1, 6, 11, 16, 21, 31}) touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.80", "-3.67", 2020, 8, d);
  // neighbours in space and time
  touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.79", "-3.67", 2020, 8, 1);
  touch_acquisition(dir.path(), Satellite::Sentinel2, "-54.80", "-3.67", 2020, 7, 31);
  touch(dir / "Deforestation_-54.80_-3.67_2020_08.tiff");
  const Catalog c = build_catalog(dir.path());

  const auto sets = resolve_query(c, query("-54.8", "-3.670", 2020, 8));
  REQUIRE(sets.size() == 11);
  std::map<Satellite, int> per_sat;
  for (const auto& s : sets) {
    ++per_sat[s.satellite];
    CHECK(s.lon == g("-54.80"));
    CHECK(s.date.year == 2020);
    CHECK(s.date.month == 8);
    REQUIRE(s.bands.size() == select_bands(s.satellite).size());
    for (std::size_t i = 0; i < s.bands.size(); ++i) CHECK(s.bands[i].band == select_bands(s.satellite)[i]);
  }
  CHECK(per_sat[Satellite::Landsat8] == 2);
  CHECK(per_sat[Satellite::Sentinel1] == 3);
  CHECK(per_sat[Satellite::Sentinel2] == 6);
  CHECK(std::is_sorted(sets.begin(), sets.end(), [](const CandidateSet& a, const CandidateSet& b) {
    return std::tie(a.date, a.satellite) < std::tie(b.date, b.satellite);
  }));

  CHECK(resolve_query(c, query("-54.80", "-3.67", 2020, 9)).empty());
  CHECK(resolve_query(c, query("-54.80", "-3.68", 2020, 8)).empty());
}

TEST_CASE("resolve_query agrees with a linear scan on a random catalog") {
  TempDir dir;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> loc(0, 2), month(1, 3), day(1, 28), sat(0, 2), drop(0, 5);
  std::vector<fs::path> written;
  for (int i = 0; i < 120; ++i) {
    const auto s = static_cast<Satellite>(sat(rng));
    const GridCoord lon = GridCoord::from_centi(-5480 + loc(rng));
    const Date d{2020, month(rng), day(rng)};
    const int skip = drop(rng);  // 0: drop the first band, making the date incomplete
    const auto& bands = select_bands(s);
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (skip == 0 && b == 0) continue;
      TileRecord r{s, bands[b], lon, g("-3.67"), d, {}, TileKind::Imagery};
      touch(dir / format_filename(r));
    }
  }
  const Catalog c = build_catalog(dir.path());
  for (int l = 0; l < 3; ++l) {
    for (int m = 1; m <= 3; ++m) {
      const Query q{GridCoord::from_centi(-5480 + l), g("-3.67"), 2020, m, "", ""};
      // linear scan: group every record at q by (satellite, day), keep complete groups
      std::map<std::pair<Satellite, int>, std::set<std::string>> groups;
      std::map<std::pair<Satellite, int>, int> counts;
      for (const auto& r : c.records()) {
        if (r.kind != TileKind::Imagery || r.lon != q.lon || r.lat != q.lat || r.date.year != 2020 || r.date.month != m)
          continue;
        groups[{*r.satellite, r.date.day}].insert(r.band);
        ++counts[{*r.satellite, r.date.day}];
      }
      std::set<std::pair<Satellite, int>> expected;
      for (const auto& [k, bands] : groups) {
        const auto& want = select_bands(k.first);
        if (bands == std::set<std::string>(want.begin(), want.end()) && counts[k] == static_cast<int>(want.size())) {
          expected.insert(k);
        }
      }
      std::set<std::pair<Satellite, int>> got;
      for (const auto& s : resolve_query(c, q)) got.insert({s.satellite, s.date.day});
      CHECK(got == expected);
    }
  }
  // all_candidates covers every query's sets
  std::size_t total = 0;
  for (const auto& key : c.keys()) total += resolve_query(c, {key.lon, key.lat, key.year, key.month, "", ""}).size();
  CHECK(all_candidates(c).size() == total);
}
