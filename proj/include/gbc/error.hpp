#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbc {

// Base for every error raised by the library. The module tag names the
// component that detected the problem ("graph", "htb", "engine", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message);

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed; indicates a bug, not bad input.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A size guard refused the request (oracle enumeration limits).
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace gbc
