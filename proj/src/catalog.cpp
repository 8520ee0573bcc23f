#include "fg/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "fg/error.hpp"
#include "fg/preprocess.hpp"

namespace fg {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> label_fields(const FilenameGrammar& g) {
  std::vector<std::string> out;
  for (const auto& f : g.fields) {
    if (f != "band" && f != "day") out.push_back(f);
  }
  return out;
}

std::string_view field_value(const std::vector<std::string>& fields, const std::vector<std::string_view>& tokens,
                             std::string_view field) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == field) return tokens[i];
  }
  return {};
}

bool valid_day(int year, int month, int day) {
  using namespace std::chrono;
  return year_month_day{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                        std::chrono::day{static_cast<unsigned>(day)}}
      .ok();
}

std::string two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

}  // namespace

TileRecord parse_filename(std::string_view name, const FilenameGrammar& grammar) {
  const std::string full(name);
  std::string_view base = name;
  if (auto slash = base.find_last_of('/'); slash != std::string_view::npos) base = base.substr(slash + 1);

  auto bad = [&](const std::string& why) { return Error(Errc::BadFilename, full + ": " + why); };

  std::string_view stem;
  for (std::string_view ext : {".tiff", ".tif"}) {
    if (base.size() > ext.size() && base.ends_with(ext)) {
      stem = base.substr(0, base.size() - ext.size());
      break;
    }
  }
  if (stem.empty()) throw bad("not a .tiff file");

  const auto tokens = split(stem, grammar.separator);
  const auto label_layout = label_fields(grammar);

  TileRecord rec;
  rec.path = full;
  const std::vector<std::string>* layout = nullptr;
  if (tokens.size() == label_layout.size() &&
      field_value(label_layout, tokens, "collection") == grammar.label_collection) {
    layout = &label_layout;
    rec.kind = TileKind::Label;
  } else if (tokens.size() == grammar.fields.size()) {
    layout = &grammar.fields;
    rec.kind = TileKind::Imagery;
    const std::string_view collection = field_value(grammar.fields, tokens, "collection");
    if (collection == grammar.label_collection) throw bad("label with band/day fields");
    rec.satellite = satellite_from_name(collection);
    if (!rec.satellite) {
      if (collection == "Landsat5") throw Error(Errc::ExcludedCollection, full);
      throw Error(Errc::UnknownCollection, full + ": " + std::string(collection));
    }
    rec.band = std::string(field_value(grammar.fields, tokens, "band"));
    if (rec.band.empty()) throw bad("empty band");
  } else {
    // A wrong token count may still name an excluded collection; report that first.
    if (!tokens.empty() && tokens.front() == "Landsat5") throw Error(Errc::ExcludedCollection, full);
    throw bad("expected " + std::to_string(grammar.fields.size()) + " or " +
              std::to_string(label_layout.size()) + " fields");
  }

  auto lon = GridCoord::parse(field_value(*layout, tokens, "lon"));
  auto lat = GridCoord::parse(field_value(*layout, tokens, "lat"));
  if (!lon || lon->centi() < -18000 || lon->centi() > 18000) throw bad("longitude");
  if (!lat || lat->centi() < -9000 || lat->centi() > 9000) throw bad("latitude");
  rec.lon = *lon;
  rec.lat = *lat;

  const auto year_text = field_value(*layout, tokens, "year");
  auto year = to_int(year_text);
  auto month = to_int(field_value(*layout, tokens, "month"));
  if (!year || year_text.size() != 4) throw bad("year");
  if (!month || *month < 1 || *month > 12) throw bad("month");
  rec.date.year = *year;
  rec.date.month = *month;
  if (rec.kind == TileKind::Imagery) {
    auto day = to_int(field_value(*layout, tokens, "day"));
    if (!day || *day < 1 || !valid_day(*year, *month, *day)) throw bad("day");
    rec.date.day = *day;
  }
  return rec;
}

std::string format_filename(const TileRecord& record, const FilenameGrammar& grammar) {
  const bool label = record.kind == TileKind::Label;
  const auto layout = label ? label_fields(grammar) : grammar.fields;
  std::string out;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i) out += grammar.separator;
    const std::string& f = layout[i];
    if (f == "collection") {
      out += label ? grammar.label_collection : std::string(satellite_name(record.satellite.value()));
    } else if (f == "band") {
      out += record.band;
    } else if (f == "lon") {
      out += record.lon.str();
    } else if (f == "lat") {
      out += record.lat.str();
    } else if (f == "year") {
      out += std::to_string(record.date.year);
    } else if (f == "month") {
      out += two_digits(record.date.month);
    } else if (f == "day") {
      out += two_digits(record.date.day);
    }
  }
  return out + ".tiff";
}

Catalog::Catalog(std::vector<TileRecord> records, std::vector<std::string> skipped)
    : records_(std::move(records)), skipped_(std::move(skipped)) {
  std::sort(records_.begin(), records_.end(), [](const TileRecord& a, const TileRecord& b) {
    return a.path.generic_string() < b.path.generic_string();
  });
  std::sort(skipped_.begin(), skipped_.end());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (i > 0 && records_[i].path == records_[i - 1].path) {
      throw Error(Errc::BadFilename, "duplicate catalog path " + records_[i].path.string());
    }
    const TileRecord& r = records_[i];
    index_[{r.lon, r.lat, r.date.year, r.date.month}].push_back(i);
  }
}

std::span<const std::size_t> Catalog::at(const LocationMonth& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

std::vector<LocationMonth> Catalog::keys() const {
  std::vector<LocationMonth> out;
  out.reserve(index_.size());
  for (const auto& [k, _] : index_) out.push_back(k);
  return out;
}

Catalog build_catalog(const std::filesystem::path& root, const FilenameGrammar& grammar) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) throw Error(Errc::Unreadable, root.string());
  std::vector<std::filesystem::path> files;
  std::filesystem::recursive_directory_iterator it(root, ec), end;
  if (ec) throw Error(Errc::Unreadable, root.string() + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) throw Error(Errc::Unreadable, root.string() + ": " + ec.message());
    if (it->is_regular_file()) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());

  std::vector<TileRecord> records;
  std::vector<std::string> skipped;
  for (const auto& f : files) {
    try {
      records.push_back(parse_filename(f.generic_string(), grammar));
    } catch (const Error&) {
      skipped.push_back(f.generic_string());
    }
  }
  return Catalog(std::move(records), std::move(skipped));
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  json records = json::array();
  for (const auto& r : catalog.records()) {
    json j;
    j["satellite"] = r.satellite ? json(std::string(satellite_name(*r.satellite))) : json(nullptr);
    j["band"] = r.kind == TileKind::Label ? json(nullptr) : json(r.band);
    j["lon"] = r.lon.str();
    j["lat"] = r.lat.str();
    j["year"] = r.date.year;
    j["month"] = r.date.month;
    j["day"] = r.date.has_day() ? json(r.date.day) : json(nullptr);
    j["path"] = r.path.generic_string();
    j["kind"] = r.kind == TileKind::Label ? "Label" : "Imagery";
    records.push_back(std::move(j));
  }
  json doc;
  doc["records"] = std::move(records);
  doc["skipped"] = catalog.skipped();

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Unwritable, path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(Errc::Unwritable, path.string());
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Unreadable, path.string());
  json doc;
  try {
    doc = json::parse(in);
    std::vector<TileRecord> records;
    for (const auto& j : doc.at("records")) {
      TileRecord r;
      r.kind = j.at("kind").get<std::string>() == "Label" ? TileKind::Label : TileKind::Imagery;
      if (r.kind == TileKind::Imagery) {
        r.satellite = satellite_from_name(j.at("satellite").get<std::string>());
        if (!r.satellite) throw Error(Errc::UnknownCollection, j.at("satellite").dump());
        r.band = j.at("band").get<std::string>();
        r.date.day = j.at("day").get<int>();
      }
      auto lon = GridCoord::parse(j.at("lon").get<std::string>());
      auto lat = GridCoord::parse(j.at("lat").get<std::string>());
      if (!lon || !lat) throw Error(Errc::BadConfig, path.string() + ": bad coordinate");
      r.lon = *lon;
      r.lat = *lat;
      r.date.year = j.at("year").get<int>();
      r.date.month = j.at("month").get<int>();
      r.path = j.at("path").get<std::string>();
      records.push_back(std::move(r));
    }
    return Catalog(std::move(records), doc.at("skipped").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw Error(Errc::Unreadable, path.string() + ": " + e.what());
  }
}

namespace {

/// Groups the imagery of one location-month into acquisitions; returns the
/// band-complete ones and counts the rest.
std::vector<CandidateSet> complete_sets(const Catalog& catalog, const LocationMonth& key, std::size_t* incomplete) {
  std::map<std::tuple<Satellite, int>, std::map<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t idx : catalog.at(key)) {
    const TileRecord& r = catalog.records()[idx];
    if (r.kind != TileKind::Imagery) continue;
    groups[{*r.satellite, r.date.day}][r.band].push_back(idx);
  }
  std::vector<CandidateSet> out;
  for (const auto& [group_key, by_band] : groups) {
    const auto [sat, day] = group_key;
    CandidateSet set;
    set.satellite = sat;
    set.lon = key.lon;
    set.lat = key.lat;
    set.date = {key.year, key.month, day};
    bool complete = true;
    for (const auto& band : select_bands(sat)) {
      auto it = by_band.find(band);
      if (it == by_band.end() || it->second.size() != 1) {
        complete = false;
        break;
      }
      set.bands.push_back(catalog.records()[it->second.front()]);
    }
    if (complete) {
      out.push_back(std::move(set));
    } else if (incomplete) {
      ++*incomplete;
    }
  }
  std::sort(out.begin(), out.end(), [](const CandidateSet& a, const CandidateSet& b) {
    return std::tie(a.date, a.satellite) < std::tie(b.date, b.satellite);
  });
  return out;
}

}  // namespace

PairingResult pair_training(const Catalog& catalog) {
  PairingResult result;
  for (const auto& key : catalog.keys()) {
    std::vector<std::size_t> labels;
    for (std::size_t idx : catalog.at(key)) {
      if (catalog.records()[idx].kind == TileKind::Label) labels.push_back(idx);
    }
    if (labels.empty()) continue;
    for (std::size_t label_idx : labels) {
      std::size_t incomplete = 0;
      for (auto& set : complete_sets(catalog, key, &incomplete)) {
        result.pairs.push_back({std::move(set.bands), catalog.records()[label_idx]});
      }
      result.incomplete_dates += incomplete;
    }
  }
  return result;
}

std::vector<CandidateSet> resolve_query(const Catalog& catalog, const Query& q) {
  return complete_sets(catalog, q.key(), nullptr);
}

std::vector<CandidateSet> all_candidates(const Catalog& catalog) {
  std::vector<CandidateSet> out;
  for (const auto& key : catalog.keys()) {
    auto sets = complete_sets(catalog, key, nullptr);
    out.insert(out.end(), std::make_move_iterator(sets.begin()), std::make_move_iterator(sets.end()));
  }
  return out;
}

}  // namespace fg
