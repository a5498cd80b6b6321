#pragma once

#include "tia/minij/ast.hpp"
#include "tia/minij/hierarchy.hpp"

#include <map>
#include <string>
#include <vector>

namespace tia::minij {

// Static resolution of one name expression or assignment target.
struct NameRef {
  enum class Kind { Local, Field, Class };
  Kind kind = Kind::Local;
  std::string type; // declared type; class name for Kind::Class
};

// Compile-time binding of one call site. Instance calls keep the signature
// used for dynamic lookup at dispatch time; static calls and constructor
// calls are bound directly.
struct ResolvedCall {
  bool staticDispatch = false;
  std::string definingClass;
  std::string methodName;
  std::vector<std::string> paramTypes;
  std::string returnType;
  MethodId staticTarget;
};

// Side tables produced by the checker, keyed by AST node address. The AST
// itself stays immutable.
struct CheckInfo {
  std::map<const Expr *, NameRef> names;
  std::map<const Stmt *, NameRef> assignTargets;
  std::map<const Expr *, ResolvedCall> calls;
  std::map<const Expr *, MethodId> ctorCalls;
  std::map<const Expr *, std::string> exprTypes; // "" for void
};

// Type-checks every method body of the program. Throws StaticCheckError
// (or a subclass) on the first violation.
CheckInfo checkProgram(const Program &units, const ClassHierarchy &h);

// Type-checks one test body against the program; resolutions are appended
// to `info`. Test bodies run outside any class: no `this`, no fields, no
// unqualified calls.
void checkTestBody(const Block &body, const std::string &testName,
                   const ClassHierarchy &h, CheckInfo &info);

} // namespace tia::minij
