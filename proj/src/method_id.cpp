#include "tia/method_id.hpp"

#include <cctype>

namespace tia {

std::string MethodId::canonical() const {
  std::string out = className;
  out += '.';
  out += methodName;
  out += '(';
  for (size_t i = 0; i < paramTypes.size(); ++i) {
    if (i)
      out += ',';
    out += paramTypes[i];
  }
  out += ')';
  if (!isConstructor)
    out += returnType;
  return out;
}

static bool isIdent(const std::string &s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return !std::isdigit(static_cast<unsigned char>(s[0]));
}

std::optional<MethodId> MethodId::fromCanonical(const std::string &text) {
  auto dot = text.find('.');
  auto open = text.find('(', dot == std::string::npos ? 0 : dot);
  auto close = text.find(')', open == std::string::npos ? 0 : open);
  if (dot == std::string::npos || open == std::string::npos ||
      close == std::string::npos || dot > open)
    return std::nullopt;

  MethodId id;
  id.className = text.substr(0, dot);
  id.methodName = text.substr(dot + 1, open - dot - 1);
  id.returnType = text.substr(close + 1);
  if (!isIdent(id.className) || !isIdent(id.methodName))
    return std::nullopt;
  if (!id.returnType.empty() && !isIdent(id.returnType))
    return std::nullopt;

  std::string params = text.substr(open + 1, close - open - 1);
  size_t start = 0;
  while (start < params.size()) {
    auto comma = params.find(',', start);
    auto end = comma == std::string::npos ? params.size() : comma;
    std::string p = params.substr(start, end - start);
    if (!isIdent(p))
      return std::nullopt;
    id.paramTypes.push_back(std::move(p));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
    if (start == params.size())
      return std::nullopt; // trailing comma
  }

  id.isConstructor = id.className == id.methodName && id.returnType.empty();
  return id;
}

} // namespace tia
