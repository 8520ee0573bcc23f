#include "fg/stack_io.hpp"

#include <fstream>

#include <json.hpp>

#include "binary_io.hpp"
#include "fg/error.hpp"
#include "fg/segment.hpp"

namespace fg {

namespace {

constexpr char kMagic[4] = {'F', 'G', 'S', 'T'};
constexpr std::size_t kHeader = 20;

using binio::get_u32;
using binio::put_u32;

}  // namespace

std::filesystem::path write_stack(const ImageStack& stack, const std::filesystem::path& dir) {
  const std::string id = acquisition_id(stack.satellite, stack.lon, stack.lat, stack.date);
  const auto path = dir / (id + ".fgst");

  std::vector<char> bytes(kMagic, kMagic + 4);
  bytes.reserve(kHeader + 4 * stack.channels.size() * kTileSize * kTileSize);
  put_u32(bytes, 1);
  put_u32(bytes, kTileSize);
  put_u32(bytes, kTileSize);
  put_u32(bytes, static_cast<std::uint32_t>(stack.channels.size()));
  std::vector<std::string> bands;
  for (const auto& c : stack.channels) {
    require_tile_size(c.width(), c.height(), "stack channel " + c.meta.band);
    binio::put_floats(bytes, c.values());
    bands.push_back(c.meta.band);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Unwritable, path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));

  nlohmann::json side;
  side["satellite"] = std::string(satellite_name(stack.satellite));
  side["bands"] = bands;
  side["lon"] = stack.lon.str();
  side["lat"] = stack.lat.str();
  side["year"] = stack.date.year;
  side["month"] = stack.date.month;
  side["day"] = stack.date.day;
  auto side_path = path;
  side_path.replace_extension(".json");
  std::ofstream sout(side_path, std::ios::trunc);
  if (!sout) throw Error(Errc::Unwritable, side_path.string());
  sout << side.dump(2) << '\n';
  return path;
}

ImageStack read_stack(const std::filesystem::path& fgst_path) {
  const std::vector<char> bytes = binio::read_file(fgst_path);
  if (bytes.size() < kHeader || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(Errc::BadMagic, fgst_path.string());
  }
  const std::uint32_t w = get_u32(bytes.data() + 8);
  const std::uint32_t h = get_u32(bytes.data() + 12);
  const std::uint32_t channels = get_u32(bytes.data() + 16);
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  if (bytes.size() != kHeader + 4 * plane * channels) throw Error(Errc::LengthMismatch, fgst_path.string());

  auto side_path = fgst_path;
  side_path.replace_extension(".json");
  std::ifstream sin(side_path);
  if (!sin) throw Error(Errc::Unreadable, side_path.string());
  try {
    const auto side = nlohmann::json::parse(sin);
    ImageStack stack;
    auto sat = satellite_from_name(side.at("satellite").get<std::string>());
    if (!sat) throw Error(Errc::UnknownCollection, side_path.string());
    stack.satellite = *sat;
    auto lon = GridCoord::parse(side.at("lon").get<std::string>());
    auto lat = GridCoord::parse(side.at("lat").get<std::string>());
    if (!lon || !lat) throw Error(Errc::BadConfig, side_path.string() + ": coordinates");
    stack.lon = *lon;
    stack.lat = *lat;
    stack.date = {side.at("year").get<int>(), side.at("month").get<int>(), side.at("day").get<int>()};
    const auto bands = side.at("bands").get<std::vector<std::string>>();
    if (bands.size() != channels) throw Error(Errc::LengthMismatch, side_path.string() + ": band count");
    for (std::uint32_t c = 0; c < channels; ++c) {
      std::vector<float> values(plane);
      const char* base = bytes.data() + kHeader + 4 * plane * c;
      binio::get_floats(base, values);
      stack.channels.emplace_back(static_cast<int>(w), static_cast<int>(h), std::move(values),
                                  TileMeta{stack.satellite, bands[c], stack.lon, stack.lat, stack.date});
    }
    return stack;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Unreadable, side_path.string() + ": " + e.what());
  }
}

}  // namespace fg
