#pragma once

#include "tia/minij/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tia::minij {

// Parses one program file (a sequence of class declarations). Positions are
// attached to every declaration and statement; comments and whitespace are
// not represented. Duplicate classes within the unit, duplicate method
// signatures within a class, and malformed constructors raise
// DeclarationError; everything else raises SyntaxError.
SourceUnit parseUnit(std::string_view source, const std::string &path);

// A test file is a sequence of parameterless top-level procedures:
//   name() { ... }
struct ParsedTest {
  std::string name;
  Block body;
  SourcePos pos;
};

std::vector<ParsedTest> parseTestFile(std::string_view source,
                                      const std::string &path);

} // namespace tia::minij
