#include "fg/segment.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fg/error.hpp"
#include "fg/indices.hpp"
#include "fg/kernels.hpp"

namespace fg {

namespace {

using json = nlohmann::json;

std::string two_digits(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

GridCoord coord_from_json(const json& j, const std::string& what) {
  if (j.is_string()) {
    if (auto g = GridCoord::parse(j.get<std::string>())) return *g;
  } else if (j.is_number()) {
    return GridCoord::from_centi(static_cast<int>(std::lround(j.get<double>() * 100.0)));
  }
  throw Error(Errc::BadConfig, "sidecar " + what + " is not a grid coordinate: " + j.dump());
}

}  // namespace

double deforestation_ratio(const ProbabilityMask& mask, double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(Errc::OutOfRange, "binarize level " + std::to_string(level));
  if (mask.size() == 0) throw Error(Errc::EmptyInput, "empty mask");
  const std::size_t n = kernels::parallel::count_at_least(mask.values(), static_cast<float>(level));
  return static_cast<double>(n) / static_cast<double>(mask.size());
}

Prediction::Prediction(ProbabilityMask mask, PredictionMeta meta, double ratio_level)
    : mask_(std::move(mask)), meta_(std::move(meta)), level_(ratio_level),
      ratio_(deforestation_ratio(mask_, ratio_level)) {}

std::string acquisition_id(Satellite satellite, GridCoord lon, GridCoord lat, Date date) {
  return std::string(satellite_name(satellite)) + "_" + lon.str() + "_" + lat.str() + "_" +
         std::to_string(date.year) + "_" + two_digits(date.month) + "_" + two_digits(date.day);
}

ProbabilityMask index_predict(const ImageStack& stack, const IndexSegmenterParams& params,
                              const NormalizationTable& table) {
  if (!(params.t_low < params.t_high)) {
    throw Error(Errc::BadConfig, "index segmenter needs t_low < t_high");
  }
  const BandRoles roles = band_roles(stack.satellite);
  const BandRaster& nir = stack.channel(roles.nir);
  const BandRaster& swir = stack.channel(roles.swir);
  const BandRange& nir_range = table.at(stack.satellite, roles.nir);
  const BandRange& swir_range = table.at(stack.satellite, roles.swir);

  kernels::NbrRamp ramp;
  ramp.nir_lo = nir_range.lo;
  ramp.nir_scale = nir_range.hi - nir_range.lo;
  ramp.swir_lo = swir_range.lo;
  ramp.swir_scale = swir_range.hi - swir_range.lo;
  ramp.t_low = params.t_low;
  ramp.t_high = params.t_high;

  std::vector<float> out(nir.values().size());
  kernels::parallel::nbr_probability(nir.values(), swir.values(), ramp, out);
  return ProbabilityMask(nir.width(), nir.height(), std::move(out));
}

IndexSegmenter::IndexSegmenter(IndexSegmenterParams params, NormalizationTable table)
    : params_(params), table_(std::move(table)) {
  if (!(params_.t_low < params_.t_high)) throw Error(Errc::BadConfig, "index segmenter needs t_low < t_high");
}

ProbabilityMask IndexSegmenter::predict(const ImageStack& stack) const {
  return index_predict(stack, params_, table_);
}

Prediction predict_stack(const Predictor& predictor, const ImageStack& stack, double ratio_level) {
  PredictionMeta meta;
  meta.satellite = stack.satellite;
  meta.lon = stack.lon;
  meta.lat = stack.lat;
  meta.date = stack.date;
  for (const auto& c : stack.channels) meta.band_set.push_back(c.meta.band);
  meta.source = predictor.name();
  meta.id = acquisition_id(stack.satellite, stack.lon, stack.lat, stack.date);
  return Prediction(predictor.predict(stack), std::move(meta), ratio_level);
}

std::filesystem::path sidecar_path(const std::filesystem::path& fgpm_path) {
  auto p = fgpm_path;
  p.replace_extension(".json");
  return p;
}

Prediction import_mask(const std::filesystem::path& fgpm_path, const std::filesystem::path& sidecar,
                       double ratio_level) {
  ProbabilityMask mask = read_raw(fgpm_path);
  require_tile_size(mask.width(), mask.height(), fgpm_path.string());

  std::ifstream in(sidecar);
  if (!in) throw Error(Errc::Unreadable, sidecar.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::Unreadable, sidecar.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::Unreadable, sidecar.string() + ": not a JSON object");

  std::string missing;
  for (const char* key : {"satellite", "band_set", "lon", "lat", "year", "month", "day", "source"}) {
    if (!doc.contains(key)) missing += missing.empty() ? key : std::string(", ") + key;
  }
  if (!missing.empty()) throw Error(Errc::MissingKey, sidecar.string() + ": " + missing);

  try {
    PredictionMeta meta;
    auto sat = satellite_from_name(doc.at("satellite").get<std::string>());
    if (!sat) throw Error(Errc::UnknownCollection, sidecar.string() + ": " + doc.at("satellite").dump());
    meta.satellite = *sat;
    meta.band_set = doc.at("band_set").get<std::vector<std::string>>();
    meta.lon = coord_from_json(doc.at("lon"), "lon");
    meta.lat = coord_from_json(doc.at("lat"), "lat");
    meta.date.year = doc.at("year").get<int>();
    meta.date.month = doc.at("month").get<int>();
    meta.date.day = doc.at("day").get<int>();
    if (meta.date.month < 1 || meta.date.month > 12) throw Error(Errc::OutOfRange, sidecar.string() + ": month");
    meta.source = doc.at("source").get<std::string>();
    meta.id = fgpm_path.stem().string();
    return Prediction(std::move(mask), std::move(meta), ratio_level);
  } catch (const json::exception& e) {
    throw Error(Errc::BadConfig, sidecar.string() + ": " + e.what());
  }
}

std::filesystem::path export_prediction(const Prediction& prediction, const std::filesystem::path& dir) {
  const PredictionMeta& m = prediction.meta();
  const auto fgpm = dir / (m.id + ".fgpm");
  write_raw(prediction.mask(), fgpm);

  json doc;
  doc["satellite"] = std::string(satellite_name(m.satellite));
  doc["band_set"] = m.band_set;
  doc["lon"] = m.lon.str();
  doc["lat"] = m.lat.str();
  doc["year"] = m.date.year;
  doc["month"] = m.date.month;
  doc["day"] = m.date.day;
  doc["source"] = m.source;
  std::ofstream out(sidecar_path(fgpm), std::ios::trunc);
  if (!out) throw Error(Errc::Unwritable, sidecar_path(fgpm).string());
  out << doc.dump(2) << '\n';
  return fgpm;
}

}  // namespace fg
