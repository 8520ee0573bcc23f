#include "fg/error.hpp"

namespace fg {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::Unreadable: return "unreadable";
    case Errc::MultiBand: return "multi-band";
    case Errc::UnsupportedFormat: return "unsupported sample format";
    case Errc::BadMagic: return "bad magic";
    case Errc::LengthMismatch: return "length mismatch";
    case Errc::Unwritable: return "unwritable";
    case Errc::BadFilename: return "bad filename";
    case Errc::UnknownCollection: return "unknown collection";
    case Errc::ExcludedCollection: return "excluded collection";
    case Errc::MissingBand: return "missing band";
    case Errc::DuplicateBand: return "duplicate band";
    case Errc::MixedDates: return "mixed dates";
    case Errc::MissingEntry: return "missing entry";
    case Errc::TooSmall: return "too small";
    case Errc::OutOfRange: return "out of range";
    case Errc::DimensionMismatch: return "dimension mismatch";
    case Errc::EmptyInput: return "empty input";
    case Errc::NoData: return "no data for query";
    case Errc::MissingKey: return "missing key";
    case Errc::BadConfig: return "bad config";
    case Errc::RequiresOptical: return "index segmenter requires optical bands";
  }
  return "unknown";
}

}  // namespace fg
