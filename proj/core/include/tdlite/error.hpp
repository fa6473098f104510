#pragma once

#include <stdexcept>
#include <string>

namespace tdl {

/// Position in a source text; line and column are 1-based, 0 means unknown.
struct SourceLocation {
  int line = 0;
  int column = 0;

  std::string str() const;
};

/// Error raised by the toolkit. `code()` is a stable machine-readable tag
/// such as SYNTAX_ERROR or PAST_OPERATOR_PRESENT.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, SourceLocation loc = {});

  const std::string& code() const noexcept { return code_; }
  const SourceLocation& location() const noexcept { return loc_; }

 private:
  std::string code_;
  SourceLocation loc_;
};

}  // namespace tdl
