#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpm {

// User-facing errors: bad input files or inconsistent run parameters.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Programming errors: contract violations inside the engine. These indicate
// a bug in the caller, not bad user input.
class OwnershipError : public std::logic_error {
 public:
  explicit OwnershipError(const std::string& what) : std::logic_error(what) {}
};

class RedundancyError : public std::logic_error {
 public:
  explicit RedundancyError(const std::string& what) : std::logic_error(what) {}
};

class RoutingError : public std::logic_error {
 public:
  explicit RoutingError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gpm
