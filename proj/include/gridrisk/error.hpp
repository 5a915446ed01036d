#pragma once

#include <stdexcept>
#include <string>

namespace gridrisk {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed files, invalid parameters, inconsistent graphs.
// The CLI maps these to exit status 2; anything else is a runtime failure.
class InputError : public Error {
 public:
  using Error::Error;
};

#define GRIDRISK_INPUT_ERROR(Name)        \
  class Name : public InputError {        \
   public:                                \
    using InputError::InputError;         \
  }

// attack graph construction and queries
GRIDRISK_INPUT_ERROR(DuplicateNode);
GRIDRISK_INPUT_ERROR(DanglingEdge);
GRIDRISK_INPUT_ERROR(CycleDetected);
GRIDRISK_INPUT_ERROR(EmptyPath);
GRIDRISK_INPUT_ERROR(NotARoot);
GRIDRISK_INPUT_ERROR(MissingEdge);
GRIDRISK_INPUT_ERROR(UnknownTarget);

// data ingestion
GRIDRISK_INPUT_ERROR(ParseError);
GRIDRISK_INPUT_ERROR(ValidationError);
GRIDRISK_INPUT_ERROR(WrongLength);
GRIDRISK_INPUT_ERROR(DomainError);
GRIDRISK_INPUT_ERROR(FleetTooLarge);

// report bundles
GRIDRISK_INPUT_ERROR(MissingArtifact);

#undef GRIDRISK_INPUT_ERROR

class NegativeLoad : public InputError {
 public:
  explicit NegativeLoad(std::size_t hour)
      : InputError("negative load at hour " + std::to_string(hour)), hour_(hour) {}
  std::size_t hour() const noexcept { return hour_; }

 private:
  std::size_t hour_;
};

}  // namespace gridrisk
