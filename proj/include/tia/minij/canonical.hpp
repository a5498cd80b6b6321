#pragma once

#include "tia/minij/ast.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tia::minij {

// Normalized token sequence of a method body. Formatting, comments and
// whitespace never influence it; any semantic token difference does.
std::vector<std::string> canonicalBody(const MethodDecl &decl);
std::vector<std::string> canonicalBody(const Block &body);

// FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a64(const std::string &bytes);
std::string hexDigest(std::uint64_t value);
std::string digestBytes(const std::string &bytes);

// Digest of a canonical token sequence; the source digest stored for tests.
std::string digestTokens(const std::vector<std::string> &tokens);

} // namespace tia::minij
