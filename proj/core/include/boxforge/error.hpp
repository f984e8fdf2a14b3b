#pragma once

#include <stdexcept>

namespace boxforge {

// Base class for every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or usage. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File access, decode, or encode failure. CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON; the message carries the byte offset reported by the parser.
class ParseError : public IoError {
 public:
  using IoError::IoError;
};

// Inputs that parse but break the data contract: non-finite geometry,
// dangling ids, out-of-range scores, shape mismatches. CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace boxforge
