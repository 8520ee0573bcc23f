#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fg/raster.hpp"

namespace fg {

enum class TileKind { Imagery, Label };

struct TileRecord {
  std::optional<Satellite> satellite;  // empty for labels
  std::string band;                    // empty for labels
  GridCoord lon;
  GridCoord lat;
  Date date;  // labels carry day == 0
  std::filesystem::path path;
  TileKind kind = TileKind::Imagery;

  bool operator==(const TileRecord&) const = default;
};

/// Filename layout. Field names: collection, band, lon, lat, year, month,
/// day. Labels use the same order with band and day omitted.
struct FilenameGrammar {
  std::string separator = "_";
  std::vector<std::string> fields = {"collection", "band", "lon", "lat", "year", "month", "day"};
  std::string label_collection = "Deforestation";
};

/// `name` may carry a directory; only the last component is parsed and the
/// record's path is set to `name` unchanged.
TileRecord parse_filename(std::string_view name, const FilenameGrammar& grammar = {});
/// Inverse of parse_filename: bare filename with a ".tiff" extension.
std::string format_filename(const TileRecord& record, const FilenameGrammar& grammar = {});

struct LocationMonth {
  GridCoord lon;
  GridCoord lat;
  int year = 0;
  int month = 0;

  auto operator<=>(const LocationMonth&) const = default;
};

class Catalog {
 public:
  Catalog() = default;
  /// Sorts by path; a repeated path throws Errc::BadFilename.
  explicit Catalog(std::vector<TileRecord> records, std::vector<std::string> skipped = {});

  const std::vector<TileRecord>& records() const noexcept { return records_; }
  const std::vector<std::string>& skipped() const noexcept { return skipped_; }
  /// Indices into records() for one location-month, in path order.
  std::span<const std::size_t> at(const LocationMonth& key) const;
  std::vector<LocationMonth> keys() const;

 private:
  std::vector<TileRecord> records_;
  std::vector<std::string> skipped_;
  std::map<LocationMonth, std::vector<std::size_t>> index_;
};

/// Recursive scan; unparseable files are listed in skipped(), not fatal.
Catalog build_catalog(const std::filesystem::path& root, const FilenameGrammar& grammar = {});

void save_catalog(const Catalog& catalog, const std::filesystem::path& path);
Catalog load_catalog(const std::filesystem::path& path);

struct Query {
  GridCoord lon;
  GridCoord lat;
  int year = 0;
  int month = 0;
  std::string lon_text;  // spelling from the query source, used in output names
  std::string lat_text;

  LocationMonth key() const { return {lon, lat, year, month}; }
};

/// One satellite acquisition with every selected band present once,
/// records ordered as select_bands() lists them.
struct CandidateSet {
  Satellite satellite = Satellite::Sentinel2;
  GridCoord lon;
  GridCoord lat;
  Date date;
  std::vector<TileRecord> bands;
};

struct TrainingPair {
  std::vector<TileRecord> stack_source;
  TileRecord label;
};

struct PairingResult {
  std::vector<TrainingPair> pairs;
  std::size_t incomplete_dates = 0;
};

PairingResult pair_training(const Catalog& catalog);

/// Complete acquisitions for q's location and month, sorted by (date, satellite).
std::vector<CandidateSet> resolve_query(const Catalog& catalog, const Query& q);

/// Every complete acquisition in the catalog, sorted by (location, date, satellite).
std::vector<CandidateSet> all_candidates(const Catalog& catalog);

}  // namespace fg
