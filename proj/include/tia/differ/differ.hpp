#pragma once

#include "tia/method_id.hpp"
#include "tia/minij/ast.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace tia::differ {

// Why a method landed in the change set.
//   BodyChanged / ModifiersChanged / ThrowsChanged  — changed in place
//   Removed / NameOrArgsChanged                     — no longer declared as-is
//   OverriddenByNew                                 — a new method overrides it
//   OverloadShadowedByNew                           — a new overload can steal
//                                                     its static bindings
enum class ChangeKind {
  BodyChanged,
  ModifiersChanged,
  ThrowsChanged,
  Removed,
  NameOrArgsChanged,
  OverriddenByNew,
  OverloadShadowedByNew,
};

const char *changeKindText(ChangeKind kind);
std::optional<ChangeKind> changeKindFromText(const std::string &text);

// The set H of modified methods, each tagged with every applicable kind.
// All ids refer to the OLD version's method universe; for
// OverloadShadowedByNew the id names the pre-existing method, never the
// newly added one.
struct ChangeSet {
  std::map<MethodId, std::set<ChangeKind>> entries;

  std::set<MethodId> methods() const {
    std::set<MethodId> out;
    for (const auto &[id, _] : entries)
      out.insert(id);
    return out;
  }
  bool contains(const MethodId &id) const { return entries.count(id) != 0; }
  bool empty() const { return entries.empty(); }
};

// Computes H between two program versions. Both versions must parse and
// build hierarchies; any such failure propagates as an exception, never as
// a partial result. Implicit constructors take part like declared ones
// with an empty body.
ChangeSet diffMethods(const minij::Program &oldUnits,
                      const minij::Program &newUnits);

// Set-theoretic partition of two path -> digest maps.
struct FileDelta {
  std::set<std::string> added;
  std::set<std::string> removed;
  std::set<std::string> changed;
};

FileDelta fileDelta(const std::map<std::string, std::string> &oldFiles,
                    const std::map<std::string, std::string> &newFiles);

// changes.txt encoding: one `<canonical id>\t<kind,...>` line per entry,
// sorted by the canonical rendering.
std::string renderChanges(const ChangeSet &changes);
ChangeSet parseChanges(const std::string &text); // throws FormatError

} // namespace tia::differ
