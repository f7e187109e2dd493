#include "gbc/error.hpp"

#include <utility>

namespace gbc {

Error::Error(std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + message), module_(std::move(module)) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("graph", "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace gbc
