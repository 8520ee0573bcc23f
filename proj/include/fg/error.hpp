#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fg {

enum class Errc {
  Unreadable,
  MultiBand,
  UnsupportedFormat,
  BadMagic,
  LengthMismatch,
  Unwritable,
  BadFilename,
  UnknownCollection,
  ExcludedCollection,
  MissingBand,
  DuplicateBand,
  MixedDates,
  MissingEntry,
  TooSmall,
  OutOfRange,
  DimensionMismatch,
  EmptyInput,
  NoData,
  MissingKey,
  BadConfig,
  RequiresOptical,
};

std::string_view errc_name(Errc code);

/// Every failure in the library surfaces as this exception. `code()` is
/// stable and machine-readable; `what()` carries the offending path or value.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fg
