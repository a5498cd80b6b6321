#pragma once

#include "tia/minij/ast.hpp"

#include <string>
#include <vector>

namespace tia::minij {

// Renders the AST back to source in a fixed layout. parse(print(parse(x)))
// is structurally identical to parse(x).
std::string printUnit(const SourceUnit &unit);
std::string printBlock(const Block &block, int indent = 0);
std::string printExpr(const Expr &expr);

// Flat token texts of a block, independent of the formatting of the source
// it was parsed from. Two bodies that differ only in whitespace, comments,
// or statement-internal formatting produce identical sequences.
std::vector<std::string> blockTokens(const Block &block);

// Token texts of a whole unit; used for structural AST comparison.
std::vector<std::string> unitTokens(const SourceUnit &unit);

} // namespace tia::minij
