#pragma once

#include "tia/errors.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tia::minij {

struct Token {
  enum class Kind { Ident, IntLit, StringLit, Punct, Eof };

  Kind kind;
  std::string text;        // identifier text, punctuation, or raw digits
  std::string stringValue; // decoded value for StringLit
  long long intValue = 0;
  SourcePos pos;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool isIdent(std::string_view t) const { return is(Kind::Ident, t); }
  bool isPunct(std::string_view t) const { return is(Kind::Punct, t); }
};

// Tokenizes MiniJ source. Comments (`//` and `/* */`) and whitespace are
// discarded; the result always ends with one Eof token.
std::vector<Token> lex(std::string_view source);

bool isKeyword(const std::string &word);

// Re-encodes a string value as a source literal, including quotes.
std::string escapeStringLiteral(const std::string &value);

} // namespace tia::minij
