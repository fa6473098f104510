#include "tdlite/error.hpp"

namespace tdl {

std::string SourceLocation::str() const {
  if (line == 0) return "?";
  return std::to_string(line) + ":" + std::to_string(column);
}

Error::Error(std::string code, const std::string& message, SourceLocation loc)
    : std::runtime_error(loc.line ? loc.str() + ": " + message : message),
      code_(std::move(code)),
      loc_(loc) {}

}  // namespace tdl
