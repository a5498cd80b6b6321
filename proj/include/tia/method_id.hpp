#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace tia {

// Version-independent identity of a method: defining class, name, ordered
// parameter type names, return type name ("" for void) and a constructor
// flag. This is the key used by traces, maps and the differ alike.
//
// Canonical rendering:
//   method       Class.name(T1,T2)Ret      (void return renders no suffix)
//   constructor  Class.Class(T1,T2)        (never a return suffix)
// The rendering is injective: constructors are the only members whose name
// equals their class name, and a void method is distinguishable from a
// non-void one by the absence of text after ')'.
struct MethodId {
  std::string className;
  std::string methodName;
  std::vector<std::string> paramTypes;
  std::string returnType; // "" means void (and always "" for constructors)
  bool isConstructor = false;

  std::string canonical() const;

  // Parses a canonical rendering back into a MethodId. Returns nullopt on
  // malformed input.
  static std::optional<MethodId> fromCanonical(const std::string &text);

  friend bool operator==(const MethodId &a, const MethodId &b) {
    return a.tie() == b.tie();
  }
  friend bool operator<(const MethodId &a, const MethodId &b) {
    return a.tie() < b.tie();
  }

private:
  auto tie() const {
    return std::tie(className, methodName, paramTypes, returnType,
                    isConstructor);
  }
};

} // namespace tia
