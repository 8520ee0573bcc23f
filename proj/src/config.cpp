#include "fg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fg/error.hpp"

namespace fg {

namespace {

using json = nlohmann::json;

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(Errc::BadConfig, where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) throw Error(Errc::BadConfig, "unknown key " + where + "." + key);
  }
}

void parse_normalization(const json& j, NormalizationTable& table) {
  if (!j.is_object()) throw Error(Errc::BadConfig, "normalization must be an object");
  for (const auto& [sat_name, bands] : j.items()) {
    auto sat = satellite_from_name(sat_name);
    if (!sat) throw Error(Errc::BadConfig, "normalization: unknown satellite " + sat_name);
    if (!bands.is_object()) throw Error(Errc::BadConfig, "normalization." + sat_name + " must be an object");
    for (const auto& [band, range] : bands.items()) {
      const std::string where = "normalization." + sat_name + "." + band;
      only_keys(range, {"lo", "hi"}, where);
      table.set(*sat, band, {range.at("lo").get<double>(), range.at("hi").get<double>()});
    }
  }
}

StructuringElement parse_element(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw Error(Errc::BadConfig, "fusion.structuring_element must be a 2-D 0/1 array");
  }
  const int height = static_cast<int>(j.size());
  const int width = static_cast<int>(j.front().size());
  std::vector<std::uint8_t> cells;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != width) {
      throw Error(Errc::BadConfig, "fusion.structuring_element rows differ in length");
    }
    for (const auto& v : row) {
      const int c = v.get<int>();
      if (c != 0 && c != 1) throw Error(Errc::BadConfig, "fusion.structuring_element cells must be 0 or 1");
      cells.push_back(static_cast<std::uint8_t>(c));
    }
  }
  return StructuringElement(width, height, std::move(cells));
}

void parse_fusion(const json& j, FusionConfig& f) {
  only_keys(j, {"k1", "k2", "pixel_threshold", "ratio_binarize_level", "std_mode", "boundary", "structuring_element"},
            "fusion");
  if (j.contains("k1")) f.k1 = j["k1"].get<double>();
  if (j.contains("k2")) f.k2 = j["k2"].get<double>();
  if (j.contains("pixel_threshold")) f.pixel_threshold = j["pixel_threshold"].get<double>();
  if (j.contains("ratio_binarize_level")) f.ratio_binarize_level = j["ratio_binarize_level"].get<double>();
  if (j.contains("std_mode")) {
    const auto m = j["std_mode"].get<std::string>();
    if (m == "population") f.std_mode = StdMode::Population;
    else if (m == "sample") f.std_mode = StdMode::Sample;
    else throw Error(Errc::BadConfig, "fusion.std_mode must be population or sample");
  }
  if (j.contains("boundary")) {
    const auto b = j["boundary"].get<std::string>();
    if (b == "inclusive") f.boundary = Boundary::Inclusive;
    else if (b == "exclusive") f.boundary = Boundary::Exclusive;
    else throw Error(Errc::BadConfig, "fusion.boundary must be inclusive or exclusive");
  }
  if (j.contains("structuring_element")) f.structuring_element = parse_element(j["structuring_element"]);
  f.validate();
}

void parse_grammar(const json& j, FilenameGrammar& g) {
  only_keys(j, {"separator", "fields", "label_collection"}, "filename_grammar");
  if (j.contains("separator")) g.separator = j["separator"].get<std::string>();
  if (g.separator.empty()) throw Error(Errc::BadConfig, "filename_grammar.separator is empty");
  if (j.contains("label_collection")) g.label_collection = j["label_collection"].get<std::string>();
  if (j.contains("fields")) {
    g.fields = j["fields"].get<std::vector<std::string>>();
    const std::multiset<std::string> got(g.fields.begin(), g.fields.end());
    const std::multiset<std::string> want = {"collection", "band", "lon", "lat", "year", "month", "day"};
    if (got != want) {
      throw Error(Errc::BadConfig, "filename_grammar.fields must name collection, band, lon, lat, year, month, day once each");
    }
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  try {
    const json doc = json::parse(text);
    only_keys(doc, {"normalization", "resize", "filename_grammar", "fusion", "segmenter", "parallelism"}, "config");
    if (doc.contains("normalization")) parse_normalization(doc["normalization"], cfg.normalization);
    if (doc.contains("resize")) {
      only_keys(doc["resize"], {"kernel"}, "resize");
      if (doc["resize"].contains("kernel")) cfg.resize_kernel = doc["resize"]["kernel"].get<std::string>();
      if (cfg.resize_kernel != "bilinear") {
        throw Error(Errc::BadConfig, "resize.kernel: only bilinear is supported, got " + cfg.resize_kernel);
      }
    }
    if (doc.contains("filename_grammar")) parse_grammar(doc["filename_grammar"], cfg.grammar);
    if (doc.contains("fusion")) parse_fusion(doc["fusion"], cfg.fusion);
    if (doc.contains("segmenter")) {
      only_keys(doc["segmenter"], {"t_low", "t_high"}, "segmenter");
      if (doc["segmenter"].contains("t_low")) cfg.segmenter.t_low = doc["segmenter"]["t_low"].get<double>();
      if (doc["segmenter"].contains("t_high")) cfg.segmenter.t_high = doc["segmenter"]["t_high"].get<double>();
      if (!(cfg.segmenter.t_low < cfg.segmenter.t_high)) throw Error(Errc::BadConfig, "segmenter needs t_low < t_high");
    }
    if (doc.contains("parallelism")) {
      cfg.parallelism = doc["parallelism"].get<int>();
      if (cfg.parallelism < 0) throw Error(Errc::BadConfig, "parallelism must be >= 0");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::BadConfig, e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Unreadable, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace fg
