#pragma once

#include "tia/minij/ast.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tia::minij {

// Superclass relation plus per-class declared-method tables for a whole
// program. Classes without a declared constructor contribute an implicit
// no-argument constructor to their method table: it participates in traces
// and in method diffing exactly like a declared one with an empty body.
//
// Immutable after construction; holds non-owning pointers into the Program
// it was built from.
class ClassHierarchy {
public:
  // Never instantiated directly; see buildHierarchy.
  struct ClassInfo {
    const ClassDecl *decl = nullptr;
    std::string parent; // "" for the implicit root
    std::vector<MethodId> methodTable;
    bool implicitCtor = false;
    std::map<std::string, std::string> fields; // name -> type, inherited too
  };

  bool hasClass(const std::string &name) const {
    return classes_.count(name) != 0;
  }
  const ClassDecl *decl(const std::string &name) const;
  // "" when the class derives from the implicit root.
  const std::string &parentOf(const std::string &name) const;
  const std::vector<MethodId> &methodTable(const std::string &name) const;
  bool hasImplicitCtor(const std::string &name) const;
  const std::map<std::string, std::string> &
  fieldsOf(const std::string &name) const;

  // All declared classes in a deterministic order.
  std::vector<std::string> classNames() const;

  // All MethodIds of the program, implicit constructors included.
  std::set<MethodId> methodUniverse() const;

  // Root-to-class chain of strict ancestors.
  std::vector<std::string> ancestors(const std::string &name) const;
  bool isStrictAncestor(const std::string &anc, const std::string &cls) const;
  std::vector<std::string> strictDescendants(const std::string &cls) const;

  // Reflexive subtype relation over type names: Null below all reference
  // types, String below Object, declared classes below their ancestors and
  // Object. Int and Bool relate only to themselves.
  bool isSubtype(const std::string &sub, const std::string &super) const;
  bool isReferenceType(const std::string &type) const;
  bool isType(const std::string &type) const {
    return isBuiltinType(type) || hasClass(type);
  }

  // First class at or above `cls` declaring (name, paramTypes); this is the
  // dynamic-dispatch lookup. Returns nullopt when no declaration matches.
  struct Target {
    std::string definingClass;
    const MethodDecl *decl = nullptr; // null for an implicit constructor
    MethodId id;
  };
  std::optional<Target> lookup(const std::string &cls, const std::string &name,
                               const std::vector<std::string> &paramTypes) const;

  std::optional<Target> lookupCtor(const std::string &cls,
                                   const std::vector<std::string> &paramTypes) const;

  // Compile-time overload resolution: among methods visible on the receiver
  // type whose parameters accept the argument types pointwise, picks the
  // unique most specific one. Throws NoApplicableMethod / AmbiguousCall.
  Target resolveStaticCall(const std::string &receiverType,
                           const std::string &methodName,
                           const std::vector<std::string> &argTypes,
                           SourcePos pos = {}) const;

  Target resolveCtorCall(const std::string &cls,
                         const std::vector<std::string> &argTypes,
                         SourcePos pos = {}) const;

private:
  friend ClassHierarchy buildHierarchy(const Program &units);

  const ClassInfo &info(const std::string &name) const;

  std::map<std::string, ClassInfo> classes_;
};

// Validates the class graph (unknown superclasses, inheritance cycles,
// duplicate classes across units, override consistency) and builds the
// hierarchy tables.
ClassHierarchy buildHierarchy(const Program &units);

} // namespace tia::minij
