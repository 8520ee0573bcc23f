#include "fg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "fg/catalog.hpp"
#include "fg/error.hpp"
#include "fg/preprocess.hpp"
#include "fg/segment.hpp"

namespace fg {

namespace {

using json = nlohmann::json;

constexpr int kLandsatSide = 85;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream + 1)); }

// Standard normal draws shared by every file. Each file reads them through
// its own odd-stride permutation, which is far cheaper than fresh draws.
constexpr std::size_t kNoiseTable = std::size_t{1} << 16;

const std::vector<double>& noise_table() {
  static const std::vector<double> table = [] {
    std::mt19937_64 rng(0x6E6F697365ull);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> t(kNoiseTable);
    for (double& v : t) v = normal(rng);
    return t;
  }();
  return table;
}

enum class ShapeKind { Rect, Ellipse };

struct Shape {
  ShapeKind kind;
  std::size_t start_month;
  double cx, cy, half_w, half_h, growth;
};

std::vector<Shape> scene_shapes(const SceneSpec& spec) {
  std::mt19937_64 rng(mix(spec.seed, 0x5A5A));
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_real_distribution<double> center(48.0, 207.0);
  std::uniform_real_distribution<double> half(12.0, 32.0);
  std::uniform_real_distribution<double> growth(0.0, 6.0);
  std::bernoulli_distribution ellipse(0.5);
  const std::size_t months = std::max<std::size_t>(spec.months.size(), 1);
  std::uniform_int_distribution<std::size_t> start(0, months - 1);

  std::vector<Shape> shapes;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    Shape s;
    s.kind = ellipse(rng) ? ShapeKind::Ellipse : ShapeKind::Rect;
    s.start_month = k == 0 ? 0 : start(rng);
    s.cx = center(rng);
    s.cy = center(rng);
    s.half_w = half(rng);
    s.half_h = half(rng);
    s.growth = growth(rng);
    shapes.push_back(s);
  }
  return shapes;
}

bool covers(const Shape& s, std::size_t month_index, double x, double y) {
  if (month_index < s.start_month) return false;
  const double grow = s.growth * static_cast<double>(month_index - s.start_month);
  const double hw = s.half_w + grow;
  const double hh = s.half_h + grow;
  const double dx = (x - s.cx) / hw;
  const double dy = (y - s.cy) / hh;
  if (s.kind == ShapeKind::Rect) return std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
  return dx * dx + dy * dy <= 1.0;
}

double band_value(const Spectra& s, Satellite sat, const std::string& band) {
  if (sat == Satellite::Sentinel1) return band == "VV" ? s.vv : s.vh;
  if (band == "B4") return s.red;
  if (sat == Satellite::Sentinel2) {
    if (band == "B7") return s.red_edge;
    if (band == "B8") return s.nir;
    if (band == "B11") return s.swir1;
    if (band == "B12") return s.swir2;
  } else {
    if (band == "B5") return s.nir;
    if (band == "B6") return s.swir1;
    if (band == "B7") return s.swir2;
  }
  throw Error(Errc::MissingBand, band);
}

/// Fraction of cleared ground under each Landsat pixel: a 3x3 box of the
/// fine label around the corner-aligned position the resampler will use.
std::vector<double> landsat_fraction(const BinaryMask& label) {
  std::vector<double> out(static_cast<std::size_t>(kLandsatSide) * kLandsatSide);
  const double step = static_cast<double>(kTileSize - 1) / (kLandsatSide - 1);
  for (int j = 0; j < kLandsatSide; ++j) {
    for (int i = 0; i < kLandsatSide; ++i) {
      const int fx = static_cast<int>(std::lround(i * step));
      const int fy = static_cast<int>(std::lround(j * step));
      int hits = 0, total = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = fx + dx, y = fy + dy;
          if (x < 0 || y < 0 || x >= kTileSize || y >= kTileSize) continue;
          ++total;
          hits += label.at(x, y);
        }
      }
      out[static_cast<std::size_t>(j) * kLandsatSide + i] = static_cast<double>(hits) / total;
    }
  }
  return out;
}

std::string two_digits(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

struct Acquisition {
  Satellite satellite;
  Date date;
  bool failed = false;
};

json manifest_entry(const SceneManifest& m) {
  json months = json::array();
  for (const auto& [y, mo] : m.months) months.push_back({y, mo});
  return {{"seed", m.seed}, {"lon", m.lon.str()}, {"lat", m.lat.str()},
          {"months", months}, {"files", m.files}, {"outliers", m.outliers}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Unwritable, path.string());
  out << text;
  if (!out) throw Error(Errc::Unwritable, path.string());
}

/// Emits every file of one scene under `root / prefix`; paths in the
/// manifest are relative to `root`.
SceneManifest emit_scene(const SceneSpec& spec, const std::filesystem::path& root, const std::string& prefix) {
  const std::filesystem::path dir = prefix.empty() ? root : root / prefix;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error(Errc::Unwritable, dir.string());

  SceneManifest manifest;
  manifest.seed = spec.seed;
  manifest.lon = spec.lon;
  manifest.lat = spec.lat;
  manifest.months = spec.months;

  std::mt19937_64 schedule(mix(spec.seed, 0xDA7E));
  std::uint64_t file_stream = 0;

  auto emit = [&](const BandRaster& raster, const TileRecord& rec, TiffSample sample) {
    const std::string name = format_filename(rec);
    write_tiff(raster, dir / name, sample);
    manifest.files.push_back(prefix.empty() ? name : prefix + "/" + name);
  };

  for (std::size_t t = 0; t < spec.months.size(); ++t) {
    const auto [year, month] = spec.months[t];
    const BinaryMask label = scene_label(spec, t);

    TileRecord label_rec;
    label_rec.kind = TileKind::Label;
    label_rec.lon = spec.lon;
    label_rec.lat = spec.lat;
    label_rec.date = {year, month, 0};
    std::vector<float> label_values(label.values().begin(), label.values().end());
    emit(BandRaster(kTileSize, kTileSize, std::move(label_values)), label_rec, TiffSample::UInt8);

    std::vector<Acquisition> acqs;
    for (auto [sat, count] : {std::pair{Satellite::Sentinel1, spec.sentinel1_dates},
                              std::pair{Satellite::Sentinel2, spec.sentinel2_dates},
                              std::pair{Satellite::Landsat8, spec.landsat8_dates}}) {
      std::vector<int> days(28);
      std::iota(days.begin(), days.end(), 1);
      std::shuffle(days.begin(), days.end(), schedule);
      const int n = std::clamp(count, 0, 28);
      std::sort(days.begin(), days.begin() + n);
      for (int d = 0; d < n; ++d) acqs.push_back({sat, {year, month, days[d]}});
    }
    std::bernoulli_distribution fail(spec.outlier_rate);
    if (fail(schedule)) {
      std::vector<std::size_t> optical;
      for (std::size_t i = 0; i < acqs.size(); ++i) {
        if (acqs[i].satellite != Satellite::Sentinel1) optical.push_back(i);
      }
      if (!optical.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, optical.size() - 1);
        Acquisition& a = acqs[optical[pick(schedule)]];
        a.failed = true;
        manifest.outliers.push_back(acquisition_id(a.satellite, spec.lon, spec.lat, a.date));
      }
    }

    const std::vector<double> coarse = landsat_fraction(label);
    for (const Acquisition& a : acqs) {
      const int side = a.satellite == Satellite::Landsat8 ? kLandsatSide : kTileSize;
      const bool sar = a.satellite == Satellite::Sentinel1;
      for (const auto& band : select_bands(a.satellite)) {
        std::mt19937_64 rng(mix(spec.seed, 0x10000 + file_stream++));
        const double sigma = sar ? spec.noise_sigma / 100.0 : spec.noise_sigma;
        const std::vector<double>& table = noise_table();
        const std::uint64_t offset = rng();
        const std::uint64_t stride = rng() | 1u;
        const double forest = band_value(forest_spectra(), a.satellite, band);
        const double cleared = band_value(cleared_spectra(), a.satellite, band);

        std::vector<float> values(static_cast<std::size_t>(side) * side);
        for (std::size_t i = 0; i < values.size(); ++i) {
          double f = 0.0;
          if (!a.failed) f = side == kTileSize ? label.values()[i] : coarse[i];
          double v = forest + f * (cleared - forest);
          if (sigma > 0.0) v += sigma * table[(offset + i * stride) & (kNoiseTable - 1)];
          if (!sar) v = std::clamp(std::round(v), 0.0, 65535.0);
          values[i] = static_cast<float>(v);
        }
        TileRecord rec;
        rec.satellite = a.satellite;
        rec.band = band;
        rec.lon = spec.lon;
        rec.lat = spec.lat;
        rec.date = a.date;
        emit(BandRaster(side, side, std::move(values)), rec, sar ? TiffSample::Float32 : TiffSample::UInt16);
      }
    }
  }
  return manifest;
}

}  // namespace

const Spectra& forest_spectra() {
  // nir/swir1 = 3000/750 -> NBR 0.6; red from NDVI 0.7.
  static const Spectra s{3000.0 * 0.3 / 1.7, 2600.0, 3000.0, 750.0, 350.0, -7.0, -13.0};
  return s;
}

const Spectra& cleared_spectra() {
  // nir/swir1 = 1800/2700 -> NBR -0.2; red from NDVI -0.1.
  static const Spectra s{1800.0 * 1.1 / 0.9, 1900.0, 1800.0, 2700.0, 2300.0, -10.0, -17.0};
  return s;
}

BinaryMask scene_label(const SceneSpec& spec, std::size_t month_index) {
  const auto shapes = scene_shapes(spec);
  std::vector<std::uint8_t> values(static_cast<std::size_t>(kTileSize) * kTileSize, 0);
  for (int y = 0; y < kTileSize; ++y) {
    for (int x = 0; x < kTileSize; ++x) {
      for (const auto& s : shapes) {
        if (covers(s, month_index, x, y)) {
          values[static_cast<std::size_t>(y) * kTileSize + x] = 1;
          break;
        }
      }
    }
  }
  return BinaryMask(kTileSize, kTileSize, std::move(values));
}

SceneManifest generate_scene(const SceneSpec& spec, const std::filesystem::path& out_dir) {
  SceneManifest m = emit_scene(spec, out_dir, "");
  json doc;
  doc["scenes"] = json::array({manifest_entry(m)});
  write_text(out_dir / "manifest.json", doc.dump(2) + "\n");
  return m;
}

std::vector<SceneManifest> generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  if (spec.scenes < 0) throw Error(Errc::OutOfRange, "scene count " + std::to_string(spec.scenes));
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) throw Error(Errc::Unwritable, out_dir.string());

  std::vector<SceneManifest> scenes(static_cast<std::size_t>(spec.scenes));
  std::vector<std::string> failures(scenes.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < spec.scenes; ++i) {
    SceneSpec s = spec.scene;
    s.seed = mix(spec.base_seed, static_cast<std::uint64_t>(i));
    s.lon = GridCoord::from_centi(-5448 - (i % 72));
    s.lat = GridCoord::from_centi(-333 - (i / 72));
    if (s.months.empty()) s.months = {{2016 + i % 6, 8}};
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "scene_%04d", i);
    try {
      scenes[static_cast<std::size_t>(i)] = emit_scene(s, out_dir, prefix);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error(Errc::Unwritable, f);
  }

  json doc;
  doc["scenes"] = json::array();
  std::string queries = "lat,lon,year,month\n";
  for (const auto& m : scenes) {
    doc["scenes"].push_back(manifest_entry(m));
    for (const auto& [y, mo] : m.months) {
      queries += m.lat.str() + "," + m.lon.str() + "," + std::to_string(y) + "," + two_digits(mo) + "\n";
    }
  }
  write_text(out_dir / "manifest.json", doc.dump(2) + "\n");
  write_text(out_dir / "queries.csv", queries);
  return scenes;
}

std::vector<SceneManifest> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Unreadable, path.string());
  try {
    const json doc = json::parse(in);
    std::vector<SceneManifest> out;
    for (const auto& s : doc.at("scenes")) {
      SceneManifest m;
      m.seed = s.at("seed").get<std::uint64_t>();
      m.lon = GridCoord::parse(s.at("lon").get<std::string>()).value();
      m.lat = GridCoord::parse(s.at("lat").get<std::string>()).value();
      for (const auto& mo : s.at("months")) m.months.emplace_back(mo.at(0).get<int>(), mo.at(1).get<int>());
      m.files = s.at("files").get<std::vector<std::string>>();
      m.outliers = s.at("outliers").get<std::vector<std::string>>();
      out.push_back(std::move(m));
    }
    return out;
  } catch (const std::exception& e) {
    throw Error(Errc::Unreadable, path.string() + ": " + e.what());
  }
}

}  // namespace fg
