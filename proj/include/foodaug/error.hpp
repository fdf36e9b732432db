#pragma once

#include <stdexcept>
#include <string>

namespace foodaug {

// Error categories surfaced by the CLI as "<category>: <message>".
enum class ErrorKind {
  config,
  schema,
  parse,
  validation,
  generation,
  artifact,
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::schema: return "schema";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::generation: return "generation";
    case ErrorKind::artifact: return "artifact";
    case ErrorKind::io: return "io";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace foodaug
