#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hadain {

// Root of every error thrown by the library. The CLI maps ConfigError to
// exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched image dimensions, patch counts or patch sizes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters (level, overlap, eps, magnitude, gains...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A region that does not lie inside its image.
class BoundsError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed image file; carries the byte offset where decoding stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        detail_(what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  // Message without the offset suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace hadain
