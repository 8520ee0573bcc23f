#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fg/catalog.hpp"
#include "fg/config.hpp"

namespace fg::cli {

// Exit codes: 0 success, 1 fatal error, 2 partial failure (some items failed
// or some queries had no data; the rest were written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

struct CatalogArgs {
  std::filesystem::path data_dir;
  std::filesystem::path out;
  std::optional<std::filesystem::path> config;
};

struct PreprocessArgs {
  std::filesystem::path catalog;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir;
  std::optional<int> parallelism;
};

struct PredictArgs {
  std::string method = "index";
  std::filesystem::path stacks;
  std::filesystem::path masks_dir;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir;
  std::optional<int> parallelism;
};

struct FuseArgs {
  std::filesystem::path masks;
  std::filesystem::path queries;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir;
  std::optional<int> parallelism;
};

struct EvaluateArgs {
  std::filesystem::path pred;
  std::filesystem::path truth;
  std::filesystem::path out;
};

struct SynthArgs {
  int scenes = 0;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  std::string months;  // "2020-08,2020-09"; empty: one August per scene, 2016..2021
  double noise = 200.0;
  double outlier_rate = 0.0;
  int s1_dates = 1;
  int s2_dates = 8;
  int l8_dates = 5;
};

int run_catalog(const CatalogArgs& args);
int run_preprocess(const PreprocessArgs& args);
int run_predict(const PredictArgs& args);
int run_fuse(const FuseArgs& args);
int run_evaluate(const EvaluateArgs& args);
int run_synth(const SynthArgs& args);

/// Parses a `lat,lon,year,month` CSV. Throws Errc::BadConfig on malformed rows.
std::vector<Query> read_queries(const std::filesystem::path& path);

}  // namespace fg::cli
