#include "tia/differ/differ.hpp"

#include "tia/errors.hpp"
#include "tia/minij/canonical.hpp"
#include "tia/minij/hierarchy.hpp"

#include <algorithm>
#include <sstream>

namespace tia::differ {

using namespace minij;

const char *changeKindText(ChangeKind kind) {
  switch (kind) {
  case ChangeKind::BodyChanged: return "BodyChanged";
  case ChangeKind::ModifiersChanged: return "ModifiersChanged";
  case ChangeKind::ThrowsChanged: return "ThrowsChanged";
  case ChangeKind::Removed: return "Removed";
  case ChangeKind::NameOrArgsChanged: return "NameOrArgsChanged";
  case ChangeKind::OverriddenByNew: return "OverriddenByNew";
  case ChangeKind::OverloadShadowedByNew: return "OverloadShadowedByNew";
  }
  return "?";
}

std::optional<ChangeKind> changeKindFromText(const std::string &text) {
  static const ChangeKind kAll[] = {
      ChangeKind::BodyChanged,       ChangeKind::ModifiersChanged,
      ChangeKind::ThrowsChanged,     ChangeKind::Removed,
      ChangeKind::NameOrArgsChanged, ChangeKind::OverriddenByNew,
      ChangeKind::OverloadShadowedByNew};
  for (ChangeKind k : kAll)
    if (text == changeKindText(k))
      return k;
  return std::nullopt;
}

namespace {

struct MethodInfo {
  bool isStatic = false;
  std::vector<std::string> throwsSorted;
  std::vector<std::string> bodyTokens;
};

// Empty body of an implicit constructor.
std::vector<std::string> emptyBodyTokens() { return {"{", "}"}; }

std::map<MethodId, MethodInfo> collectMethods(const Program &units,
                                              const ClassHierarchy &h) {
  std::map<MethodId, MethodInfo> out;
  for (const std::string &cls : h.classNames()) {
    if (h.hasImplicitCtor(cls)) {
      MethodInfo info;
      info.bodyTokens = emptyBodyTokens();
      out.emplace(MethodId{cls, cls, {}, "", true}, std::move(info));
    }
    for (const MethodDecl &m : h.decl(cls)->methods) {
      MethodInfo info;
      info.isStatic = m.isStatic;
      info.throwsSorted = m.throwsList;
      std::sort(info.throwsSorted.begin(), info.throwsSorted.end());
      info.bodyTokens = canonicalBody(m);
      out.emplace(m.id(cls), std::move(info));
    }
  }
  return out;
}

void mark(ChangeSet &changes, const MethodId &id, ChangeKind kind) {
  changes.entries[id].insert(kind);
}

// All method ids a class exposes to its clients: its own table plus every
// non-constructor method of its strict ancestors.
std::set<MethodId> visibleMethods(const ClassHierarchy &h,
                                  const std::string &cls) {
  std::set<MethodId> out;
  const auto &own = h.methodTable(cls);
  out.insert(own.begin(), own.end());
  for (const std::string &anc : h.ancestors(cls))
    for (const MethodId &id : h.methodTable(anc))
      if (!id.isConstructor)
        out.insert(id);
  return out;
}

} // namespace

ChangeSet diffMethods(const Program &oldUnits, const Program &newUnits) {
  ClassHierarchy oldH = buildHierarchy(oldUnits);
  ClassHierarchy newH = buildHierarchy(newUnits);

  auto oldMethods = collectMethods(oldUnits, oldH);
  auto newMethods = collectMethods(newUnits, newH);

  ChangeSet changes;

  // Rule 1: same id in both versions, changed body, modifiers, or throws.
  for (const auto &[id, oldInfo] : oldMethods) {
    auto it = newMethods.find(id);
    if (it == newMethods.end())
      continue;
    const MethodInfo &newInfo = it->second;
    if (oldInfo.bodyTokens != newInfo.bodyTokens)
      mark(changes, id, ChangeKind::BodyChanged);
    if (oldInfo.isStatic != newInfo.isStatic)
      mark(changes, id, ChangeKind::ModifiersChanged);
    if (oldInfo.throwsSorted != newInfo.throwsSorted)
      mark(changes, id, ChangeKind::ThrowsChanged);
  }

  // Rule 2: old id with no counterpart. Tagged NameOrArgsChanged when the
  // class survives with a same-name method (a signature edit), Removed
  // otherwise.
  for (const auto &[id, _] : oldMethods) {
    if (newMethods.count(id))
      continue;
    bool sameNameSurvives = false;
    if (newH.hasClass(id.className))
      for (const MethodId &cand : newH.methodTable(id.className))
        if (cand.methodName == id.methodName) {
          sameNameSurvives = true;
          break;
        }
    mark(changes, id,
         sameNameSurvives ? ChangeKind::NameOrArgsChanged
                          : ChangeKind::Removed);
  }

  // Rules 3 and 4: methods first appearing in the new version, judged
  // against the NEW hierarchy; the marked method always pre-exists.
  for (const auto &[alpha, _] : newMethods) {
    if (oldMethods.count(alpha) || alpha.isConstructor)
      continue;

    // Rule 3: overrides an existing method declared in a strict ancestor.
    for (const std::string &anc : newH.ancestors(alpha.className)) {
      for (const MethodId &beta : newH.methodTable(anc)) {
        if (beta.isConstructor || beta.methodName != alpha.methodName ||
            beta.paramTypes != alpha.paramTypes)
          continue;
        if (oldMethods.count(beta))
          mark(changes, beta, ChangeKind::OverriddenByNew);
      }
    }

    // Rule 4: same name, arity and order with pairwise (super or sub) type
    // related parameters anywhere in alpha's hierarchy; the exact-tuple
    // case belongs to Rule 3.
    std::vector<std::string> relatedClasses = newH.ancestors(alpha.className);
    relatedClasses.push_back(alpha.className);
    for (const std::string &d : newH.strictDescendants(alpha.className))
      relatedClasses.push_back(d);
    for (const std::string &cls : relatedClasses) {
      for (const MethodId &beta : newH.methodTable(cls)) {
        if (beta.isConstructor || beta.methodName != alpha.methodName ||
            beta.paramTypes.size() != alpha.paramTypes.size())
          continue;
        if (beta.paramTypes == alpha.paramTypes)
          continue;
        if (!oldMethods.count(beta))
          continue;
        bool related = true;
        for (size_t i = 0; i < beta.paramTypes.size() && related; ++i) {
          const std::string &bp = beta.paramTypes[i];
          const std::string &ap = alpha.paramTypes[i];
          related = newH.isSubtype(bp, ap) || newH.isSubtype(ap, bp);
        }
        if (related)
          mark(changes, beta, ChangeKind::OverloadShadowedByNew);
      }
    }
  }

  // A class whose ancestor chain changed exposes a different method
  // surface to its clients even when no declaration moved; everything it
  // offered in the old version is treated as removed from it.
  for (const std::string &cls : oldH.classNames()) {
    if (!newH.hasClass(cls))
      continue;
    if (oldH.ancestors(cls) == newH.ancestors(cls))
      continue;
    for (const MethodId &id : visibleMethods(oldH, cls))
      mark(changes, id, ChangeKind::Removed);
  }

  return changes;
}

FileDelta fileDelta(const std::map<std::string, std::string> &oldFiles,
                    const std::map<std::string, std::string> &newFiles) {
  FileDelta delta;
  for (const auto &[path, digest] : newFiles) {
    auto it = oldFiles.find(path);
    if (it == oldFiles.end())
      delta.added.insert(path);
    else if (it->second != digest)
      delta.changed.insert(path);
  }
  for (const auto &[path, _] : oldFiles)
    if (!newFiles.count(path))
      delta.removed.insert(path);
  return delta;
}

std::string renderChanges(const ChangeSet &changes) {
  std::vector<std::pair<std::string, const std::set<ChangeKind> *>> lines;
  for (const auto &[id, kinds] : changes.entries)
    lines.emplace_back(id.canonical(), &kinds);
  std::sort(lines.begin(), lines.end());

  std::string out;
  for (const auto &[canon, kinds] : lines) {
    out += canon;
    out += '\t';
    bool first = true;
    for (ChangeKind k : *kinds) {
      if (!first)
        out += ',';
      out += changeKindText(k);
      first = false;
    }
    out += '\n';
  }
  return out;
}

ChangeSet parseChanges(const std::string &text) {
  ChangeSet changes;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty())
      continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError("missing tab separator", {lineNo, 1});
    auto id = MethodId::fromCanonical(line.substr(0, tab));
    if (!id)
      throw FormatError("bad method id '" + line.substr(0, tab) + "'",
                        {lineNo, 1});
    std::set<ChangeKind> kinds;
    std::string rest = line.substr(tab + 1);
    size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      auto end = comma == std::string::npos ? rest.size() : comma;
      std::string word = rest.substr(start, end - start);
      auto kind = changeKindFromText(word);
      if (!kind)
        throw FormatError("unknown change kind '" + word + "'", {lineNo, 1});
      kinds.insert(*kind);
      if (comma == std::string::npos)
        break;
      start = comma + 1;
    }
    if (kinds.empty())
      throw FormatError("entry without change kinds", {lineNo, 1});
    changes.entries[*id].insert(kinds.begin(), kinds.end());
  }
  return changes;
}

} // namespace tia::differ
