#pragma once

#include <optional>
#include <string>

namespace tia {

// Result of one test execution. `Never` only appears in stored maps, for
// entries that have no recorded run.
enum class Outcome { Pass, Fail, Error, Timeout, Never };

inline const char *outcomeText(Outcome o) {
  switch (o) {
  case Outcome::Pass: return "Pass";
  case Outcome::Fail: return "Fail";
  case Outcome::Error: return "Error";
  case Outcome::Timeout: return "Timeout";
  case Outcome::Never: return "Never";
  }
  return "?";
}

inline std::optional<Outcome> outcomeFromText(const std::string &text) {
  if (text == "Pass") return Outcome::Pass;
  if (text == "Fail") return Outcome::Fail;
  if (text == "Error") return Outcome::Error;
  if (text == "Timeout") return Outcome::Timeout;
  if (text == "Never") return Outcome::Never;
  return std::nullopt;
}

} // namespace tia
