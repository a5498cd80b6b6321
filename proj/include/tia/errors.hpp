#pragma once

#include <stdexcept>
#include <string>

namespace tia {

// Position of a token or declaration inside one source file. Lines and
// columns are 1-based; {0,0} means "no position available".
struct SourcePos {
  int line = 0;
  int col = 0;
};

class Error : public std::runtime_error {
public:
  Error(std::string message, SourcePos pos = {})
      : std::runtime_error(format(message, pos)), pos_(pos) {}

  SourcePos pos() const { return pos_; }

private:
  static std::string format(const std::string &message, SourcePos pos) {
    if (pos.line <= 0)
      return message;
    return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " +
           message;
  }

  SourcePos pos_;
};

// Lexical or grammatical failure; the message names the expected token.
class SyntaxError : public Error {
  using Error::Error;
};

// Duplicate classes/methods/params, bad constructor shape, and other
// declaration-level violations.
class DeclarationError : public Error {
  using Error::Error;
};

class CycleError : public Error {
  using Error::Error;
};

class UnknownSuperclassError : public Error {
  using Error::Error;
};

// Any failure of the pre-execution checks of a program or test body.
class StaticCheckError : public Error {
  using Error::Error;
};

class NoApplicableMethod : public StaticCheckError {
  using StaticCheckError::StaticCheckError;
};

class AmbiguousCall : public StaticCheckError {
  using StaticCheckError::StaticCheckError;
};

// Map file parsing failures.
class FormatError : public Error {
  using Error::Error;
};

class VersionError : public Error {
  using Error::Error;
};

} // namespace tia
