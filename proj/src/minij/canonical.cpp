#include "tia/minij/canonical.hpp"

#include "tia/minij/printer.hpp"

namespace tia::minij {

std::vector<std::string> canonicalBody(const Block &body) {
  return blockTokens(body);
}

std::vector<std::string> canonicalBody(const MethodDecl &decl) {
  return canonicalBody(decl.body);
}

std::uint64_t fnv1a64(const std::string &bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hexDigest(std::uint64_t value) {
  static const char *kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string digestBytes(const std::string &bytes) {
  return hexDigest(fnv1a64(bytes));
}

std::string digestTokens(const std::vector<std::string> &tokens) {
  std::string joined;
  for (const auto &t : tokens) {
    joined += t;
    joined += '\x1f';
  }
  return digestBytes(joined);
}

} // namespace tia::minij
