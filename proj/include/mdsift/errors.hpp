#pragma once

#include <stdexcept>
#include <string>

namespace mdsift {

// Value outside an operation's domain (bad parameter, non-finite input, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mismatched dimensions between related containers.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable external data. The kind distinguishes the
// documented failure classes of the on-disk formats.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    io,               // file missing / unreadable
    bad_header,       // magic, header encoding, or required fields broken
    unknown_version,  // container version this build does not understand
    size_mismatch,    // header geometry disagrees with the payload it claims
    truncated,        // file ends before the promised payload does
    bad_record,       // a structured text record fails validation
  };

  ParseError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Rule or pipeline configuration that cannot yield defined results
// (reference class too small for a std, single-class calibration, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mdsift
