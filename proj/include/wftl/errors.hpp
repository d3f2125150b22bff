#pragma once
// Error types shared across the library. Parsers and validators throw a
// specific subclass of Error; diagnostics (non-fatal findings) are returned
// as values instead.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wftl {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input. `position` is a byte offset into the parsed text;
// file-level parsers translate it to a line number in their messages.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t position)
      : Error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// A condition atom's subject would be bound to a non-atomic formula.
class CondSubstitutionError : public Error {
public:
  using Error::Error;
};

class ArityMismatchError : public Error {
public:
  ArityMismatchError(const std::string& pattern, std::size_t expected,
                     std::size_t got)
      : Error("pattern '" + pattern + "' expects " + std::to_string(expected) +
              " arguments, got " + std::to_string(got)),
        expected_(expected), got_(got) {}
  std::size_t expected() const { return expected_; }
  std::size_t got() const { return got_; }

private:
  std::size_t expected_;
  std::size_t got_;
};

class UnknownPatternError : public Error {
public:
  using Error::Error;
};

class DuplicatePatternError : public Error {
public:
  using Error::Error;
};

class UndeclaredParamError : public Error {
public:
  using Error::Error;
};

class EmptyPatternError : public Error {
public:
  using Error::Error;
};

class DuplicateAtomError : public Error {
public:
  using Error::Error;
};

class DuplicateLabelError : public Error {
public:
  using Error::Error;
};

class DuplicateAliasError : public Error {
public:
  using Error::Error;
};

class EmptyModelError : public Error {
public:
  using Error::Error;
};

// A broken internal invariant. Seeing this is a bug, not a user error.
class InternalError : public Error {
public:
  using Error::Error;
};

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity;
  std::string code;     // stable identifier, e.g. "UnusedExit"
  std::string message;  // human-readable detail
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

}  // namespace wftl
