#pragma once

#include <stdexcept>
#include <string>

namespace subp {

// Error categories surfaced by the CLI as "error:<category>:" lines.
enum class ErrorCategory {
  Config,
  Shape,
  Invariant,
  Format,
  Input,
  Io,
};

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Shape: return "shape";
    case ErrorCategory::Invariant: return "invariant";
    case ErrorCategory::Format: return "format";
    case ErrorCategory::Input: return "input";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorCategory::Config, m) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string& m) : Error(ErrorCategory::Shape, m) {}
};
struct InvariantError : Error {
  explicit InvariantError(const std::string& m) : Error(ErrorCategory::Invariant, m) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& m) : Error(ErrorCategory::Format, m) {}
};
struct InputError : Error {
  explicit InputError(const std::string& m) : Error(ErrorCategory::Input, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCategory::Io, m) {}
};

}  // namespace subp
