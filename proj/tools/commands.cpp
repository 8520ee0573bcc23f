#include "commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fg/catalog.hpp"
#include "fg/error.hpp"
#include "fg/fusion.hpp"
#include "fg/kernels.hpp"
#include "fg/metrics.hpp"
#include "fg/segment.hpp"
#include "fg/stack_io.hpp"
#include "fg/synth.hpp"

namespace fg::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

RunConfig config_from(const std::optional<fs::path>& path) {
  return path ? load_run_config(*path) : RunConfig{};
}

void apply_parallelism(const RunConfig& cfg, const std::optional<int>& override_n) {
  const int n = override_n.value_or(cfg.parallelism);
  kernels::set_thread_count(n);
  if (n > 0) omp_set_num_threads(n);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(Errc::Unwritable, dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Unwritable, path.string());
  out << text;
  if (!out) throw Error(Errc::Unwritable, path.string());
}

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(Errc::Unreadable, dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<GridCoord> coord_field(const json& v) {
  if (v.is_string()) return GridCoord::parse(v.get<std::string>());
  if (v.is_number()) return GridCoord::from_centi(static_cast<int>(std::lround(v.get<double>() * 100.0)));
  return std::nullopt;
}

std::string query_label(const Query& q) {
  return q.lon_text + "," + q.lat_text + "," + std::to_string(q.year) + "," + (q.month < 10 ? "0" : "") +
         std::to_string(q.month);
}

/// Failures of individual items, reported once the batch finishes.
struct Failures {
  std::vector<std::pair<std::string, std::string>> items;  // (item, error)

  void report(const char* what) const {
    for (const auto& [item, err] : items) {
      std::cerr << json{{"error", "item failed"}, {"stage", what}, {"item", item}, {"message", err}}.dump() << '\n';
    }
  }
};

}  // namespace

std::vector<Query> read_queries(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Unreadable, path.string());
  std::string line;
  if (!std::getline(in, line) || split_csv(trim(line)) != std::vector<std::string>{"lat", "lon", "year", "month"}) {
    throw Error(Errc::BadConfig, path.string() + ": header must be lat,lon,year,month");
  }
  std::vector<Query> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = path.string() + ":" + std::to_string(row);
    if (cells.size() != 4) throw Error(Errc::BadConfig, where + ": expected 4 columns");
    Query q;
    q.lat_text = cells[0];
    q.lon_text = cells[1];
    auto lat = GridCoord::parse(cells[0]);
    auto lon = GridCoord::parse(cells[1]);
    if (!lat || !lon) throw Error(Errc::BadConfig, where + ": coordinates");
    q.lat = *lat;
    q.lon = *lon;
    try {
      q.year = std::stoi(cells[2]);
      q.month = std::stoi(cells[3]);
    } catch (const std::exception&) {
      throw Error(Errc::BadConfig, where + ": year/month");
    }
    if (q.month < 1 || q.month > 12) throw Error(Errc::BadConfig, where + ": month out of range");
    out.push_back(std::move(q));
  }
  return out;
}

int run_catalog(const CatalogArgs& args) {
  const RunConfig cfg = config_from(args.config);
  const Catalog catalog = build_catalog(args.data_dir, cfg.grammar);
  save_catalog(catalog, args.out);
  std::cout << "catalog: " << catalog.records().size() << " records, " << catalog.skipped().size()
            << " skipped -> " << args.out.string() << '\n';
  return kExitOk;
}

int run_preprocess(const PreprocessArgs& args) {
  const RunConfig cfg = config_from(args.config);
  apply_parallelism(cfg, args.parallelism);
  const Catalog catalog = load_catalog(args.catalog);
  ensure_dir(args.out_dir);

  const auto sets = all_candidates(catalog);
  std::vector<std::string> errors(sets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sets.size()); ++i) {
    try {
      write_stack(load_stack(sets[i], cfg.normalization), args.out_dir);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  Failures failures;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!errors[i].empty()) {
      failures.items.emplace_back(acquisition_id(sets[i].satellite, sets[i].lon, sets[i].lat, sets[i].date), errors[i]);
    }
  }
  failures.report("preprocess");
  std::cout << "preprocess: " << sets.size() - failures.items.size() << " stacks written, "
            << failures.items.size() << " failed\n";
  return failures.items.empty() ? kExitOk : kExitPartial;
}

int run_predict(const PredictArgs& args) {
  const RunConfig cfg = config_from(args.config);
  apply_parallelism(cfg, args.parallelism);
  ensure_dir(args.out_dir);
  const double level = cfg.fusion.ratio_binarize_level;

  std::vector<fs::path> inputs;
  if (args.method == "index") {
    inputs = files_with_extension(args.stacks, ".fgst");
  } else if (args.method == "import") {
    inputs = files_with_extension(args.masks_dir, ".fgpm");
  } else {
    throw Error(Errc::BadConfig, "--method must be index or import");
  }

  const IndexSegmenter segmenter(cfg.segmenter, cfg.normalization);
  enum class Outcome { Written, NoPredictor, Failed };
  std::vector<Outcome> outcomes(inputs.size(), Outcome::Written);
  std::vector<std::string> errors(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(inputs.size()); ++i) {
    try {
      if (args.method == "index") {
        const ImageStack stack = read_stack(inputs[i]);
        if (stack.satellite == Satellite::Sentinel1) {
          outcomes[i] = Outcome::NoPredictor;
          continue;
        }
        export_prediction(predict_stack(segmenter, stack, level), args.out_dir);
      } else {
        export_prediction(import_mask(inputs[i], sidecar_path(inputs[i]), level), args.out_dir);
      }
    } catch (const std::exception& e) {
      outcomes[i] = Outcome::Failed;
      errors[i] = e.what();
    }
  }

  Failures failures;
  std::size_t written = 0, skipped = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    switch (outcomes[i]) {
      case Outcome::Written: ++written; break;
      case Outcome::NoPredictor: ++skipped; break;
      case Outcome::Failed: failures.items.emplace_back(inputs[i].filename().string(), errors[i]); break;
    }
  }
  failures.report("predict");
  std::cout << "predict(" << args.method << "): " << written << " masks written, " << skipped
            << " SAR stacks without a built-in predictor, " << failures.items.size() << " failed\n";
  return failures.items.empty() ? kExitOk : kExitPartial;
}

int run_fuse(const FuseArgs& args) {
  const RunConfig cfg = config_from(args.config);
  apply_parallelism(cfg, args.parallelism);
  cfg.fusion.validate();
  ensure_dir(args.out_dir);
  const auto queries = read_queries(args.queries);

  // Group masks by location-month from the sidecars alone; masks are loaded per query.
  std::map<LocationMonth, std::vector<fs::path>> groups;
  for (const auto& fgpm : files_with_extension(args.masks, ".fgpm")) {
    std::ifstream in(sidecar_path(fgpm));
    if (!in) throw Error(Errc::Unreadable, sidecar_path(fgpm).string());
    try {
      const json side = json::parse(in);
      auto lon = coord_field(side.at("lon"));
      auto lat = coord_field(side.at("lat"));
      if (!lon || !lat) throw Error(Errc::BadConfig, sidecar_path(fgpm).string() + ": coordinates");
      groups[{*lon, *lat, side.at("year").get<int>(), side.at("month").get<int>()}].push_back(fgpm);
    } catch (const json::exception& e) {
      throw Error(Errc::BadConfig, sidecar_path(fgpm).string() + ": " + e.what());
    }
  }

  enum class Outcome { Fused, NoData, Failed };
  std::vector<Outcome> outcomes(queries.size(), Outcome::Fused);
  std::vector<std::string> errors(queries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(queries.size()); ++i) {
    const Query& q = queries[i];
    try {
      auto it = groups.find(q.key());
      if (it == groups.end()) {
        outcomes[i] = Outcome::NoData;
        continue;
      }
      std::vector<Prediction> predictions;
      for (const auto& p : it->second) {
        predictions.push_back(import_mask(p, sidecar_path(p), cfg.fusion.ratio_binarize_level));
      }
      FusionResult result = fuse_query(q, predictions, cfg.fusion);
      const fs::path png = args.out_dir / result.report.output;
      write_mask_png(result.mask, png);
      write_text(fs::path(png).replace_extension(".json"), report_to_json(result.report) + "\n");
    } catch (const Error& e) {
      outcomes[i] = e.code() == Errc::NoData ? Outcome::NoData : Outcome::Failed;
      errors[i] = e.what();
    } catch (const std::exception& e) {
      outcomes[i] = Outcome::Failed;
      errors[i] = e.what();
    }
  }

  json summary = {{"fused", json::array()}, {"no_data", json::array()}, {"failed", json::array()}};
  Failures failures;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::string label = query_label(queries[i]);
    switch (outcomes[i]) {
      case Outcome::Fused: summary["fused"].push_back(label); break;
      case Outcome::NoData: summary["no_data"].push_back(label); break;
      case Outcome::Failed:
        summary["failed"].push_back({{"query", label}, {"error", errors[i]}});
        failures.items.emplace_back(label, errors[i]);
        break;
    }
  }
  write_text(args.out_dir / "summary.json", summary.dump(2) + "\n");
  failures.report("fuse");
  for (const auto& q : summary["no_data"]) {
    std::cerr << json{{"error", "no data for query"}, {"query", q}}.dump() << '\n';
  }
  std::cout << "fuse: " << summary["fused"].size() << " fused, " << summary["no_data"].size() << " no data, "
            << summary["failed"].size() << " failed\n";
  return summary["no_data"].empty() && summary["failed"].empty() ? kExitOk : kExitPartial;
}

namespace {

/// Key and display name of a fused output: deforestation_{lon}_{lat}_{year}_{month}.png
std::optional<std::pair<LocationMonth, std::string>> parse_fused_name(const fs::path& p) {
  if (p.extension() != ".png") return std::nullopt;
  const std::string stem = p.stem().string();
  const std::string prefix = "deforestation_";
  if (!stem.starts_with(prefix)) return std::nullopt;
  std::vector<std::string> parts;
  std::stringstream ss(stem.substr(prefix.size()));
  std::string part;
  while (std::getline(ss, part, '_')) parts.push_back(part);
  if (parts.size() != 4) return std::nullopt;
  auto lon = GridCoord::parse(parts[0]);
  auto lat = GridCoord::parse(parts[1]);
  if (!lon || !lat) return std::nullopt;
  try {
    LocationMonth key{*lon, *lat, std::stoi(parts[2]), std::stoi(parts[3])};
    return std::pair{key, parts[0] + "," + parts[1] + "," + parts[2] + "," + parts[3]};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

int run_evaluate(const EvaluateArgs& args) {
  std::error_code ec;
  if (!fs::is_directory(args.pred, ec)) throw Error(Errc::Unreadable, args.pred.string());
  if (!fs::is_directory(args.truth, ec)) throw Error(Errc::Unreadable, args.truth.string());

  std::map<LocationMonth, fs::path> truth;
  for (const auto& entry : fs::recursive_directory_iterator(args.truth)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (auto fused = parse_fused_name(p)) {
      truth.emplace(fused->first, p);
      continue;
    }
    try {
      TileRecord rec = parse_filename(p.generic_string());
      if (rec.kind == TileKind::Label) truth.emplace(LocationMonth{rec.lon, rec.lat, rec.date.year, rec.date.month}, p);
    } catch (const Error&) {
    }
  }

  std::map<LocationMonth, std::pair<fs::path, std::string>> preds;
  for (const auto& p : files_with_extension(args.pred, ".png")) {
    if (auto fused = parse_fused_name(p)) preds.emplace(fused->first, std::pair{p, fused->second});
  }
  if (preds.empty()) throw Error(Errc::EmptyInput, "no deforestation_*.png files in " + args.pred.string());

  std::vector<QueryScore> scores;
  Failures failures;
  for (const auto& [key, pred] : preds) {
    auto it = truth.find(key);
    if (it == truth.end()) {
      failures.items.emplace_back(pred.second, "no ground truth");
      continue;
    }
    try {
      const BinaryMask p = read_mask_png(pred.first);
      const BinaryMask t = it->second.extension() == ".png" ? read_mask_png(it->second) : read_label_tiff(it->second);
      scores.push_back({pred.second, confusion(p, t)});
    } catch (const std::exception& e) {
      failures.items.emplace_back(pred.second, e.what());
    }
  }
  const EvalReport report = make_eval_report(std::move(scores));
  write_text(args.out, eval_report_to_json(report) + "\n");
  failures.report("evaluate");
  std::cout << "evaluate: " << report.queries.size() << " queries, accuracy " << report.micro.accuracy << ", f1 "
            << report.micro.f1 << ", iou " << report.micro.iou << '\n';
  return failures.items.empty() ? kExitOk : kExitPartial;
}

int run_synth(const SynthArgs& args) {
  CorpusSpec spec;
  spec.scenes = args.scenes;
  spec.base_seed = args.seed;
  spec.scene.noise_sigma = args.noise;
  spec.scene.outlier_rate = args.outlier_rate;
  spec.scene.sentinel1_dates = args.s1_dates;
  spec.scene.sentinel2_dates = args.s2_dates;
  spec.scene.landsat8_dates = args.l8_dates;
  if (!args.months.empty()) {
    std::stringstream ss(args.months);
    std::string item;
    while (std::getline(ss, item, ',')) {
      int y = 0, m = 0;
      if (std::sscanf(item.c_str(), "%d-%d", &y, &m) != 2 || m < 1 || m > 12) {
        throw Error(Errc::BadConfig, "--months expects YYYY-MM[,YYYY-MM...], got " + item);
      }
      spec.scene.months.emplace_back(y, m);
    }
  }
  const auto scenes = generate_corpus(spec, args.out_dir);
  std::size_t files = 0;
  for (const auto& s : scenes) files += s.files.size();
  std::cout << "synth: " << scenes.size() << " scenes, " << files << " files -> " << args.out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace fg::cli
