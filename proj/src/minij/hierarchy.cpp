#include "tia/minij/hierarchy.hpp"

#include <algorithm>

namespace tia::minij {

const ClassHierarchy::ClassInfo &
ClassHierarchy::info(const std::string &name) const {
  auto it = classes_.find(name);
  if (it == classes_.end())
    throw Error("unknown class '" + name + "'");
  return it->second;
}

const ClassDecl *ClassHierarchy::decl(const std::string &name) const {
  return info(name).decl;
}

const std::string &ClassHierarchy::parentOf(const std::string &name) const {
  return info(name).parent;
}

const std::vector<MethodId> &
ClassHierarchy::methodTable(const std::string &name) const {
  return info(name).methodTable;
}

bool ClassHierarchy::hasImplicitCtor(const std::string &name) const {
  return info(name).implicitCtor;
}

const std::map<std::string, std::string> &
ClassHierarchy::fieldsOf(const std::string &name) const {
  return info(name).fields;
}

std::vector<std::string> ClassHierarchy::classNames() const {
  std::vector<std::string> names;
  for (const auto &[name, _] : classes_)
    names.push_back(name);
  return names;
}

std::set<MethodId> ClassHierarchy::methodUniverse() const {
  std::set<MethodId> universe;
  for (const auto &[_, ci] : classes_)
    universe.insert(ci.methodTable.begin(), ci.methodTable.end());
  return universe;
}

std::vector<std::string>
ClassHierarchy::ancestors(const std::string &name) const {
  std::vector<std::string> chain;
  for (std::string cur = parentOf(name); !cur.empty(); cur = parentOf(cur))
    chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

bool ClassHierarchy::isStrictAncestor(const std::string &anc,
                                      const std::string &cls) const {
  for (std::string cur = parentOf(cls); !cur.empty(); cur = parentOf(cur))
    if (cur == anc)
      return true;
  return false;
}

std::vector<std::string>
ClassHierarchy::strictDescendants(const std::string &cls) const {
  std::vector<std::string> out;
  for (const auto &[name, _] : classes_)
    if (isStrictAncestor(cls, name))
      out.push_back(name);
  return out;
}

bool ClassHierarchy::isReferenceType(const std::string &type) const {
  return type == kStringType || type == kObjectType || type == kNullType ||
         hasClass(type);
}

bool ClassHierarchy::isSubtype(const std::string &sub,
                               const std::string &super) const {
  if (sub == super)
    return true;
  if (sub == kNullType)
    return isReferenceType(super);
  if (sub == kStringType)
    return super == kObjectType;
  if (hasClass(sub)) {
    if (super == kObjectType)
      return true;
    return hasClass(super) && isStrictAncestor(super, sub);
  }
  return false;
}

std::optional<ClassHierarchy::Target>
ClassHierarchy::lookup(const std::string &cls, const std::string &name,
                       const std::vector<std::string> &paramTypes) const {
  for (std::string cur = cls; !cur.empty(); cur = parentOf(cur)) {
    for (const MethodDecl &m : info(cur).decl->methods) {
      if (m.isConstructor || m.name != name)
        continue;
      std::vector<std::string> ps;
      for (const auto &p : m.params)
        ps.push_back(p.typeName);
      if (ps == paramTypes)
        return Target{cur, &m, m.id(cur)};
    }
  }
  return std::nullopt;
}

std::optional<ClassHierarchy::Target>
ClassHierarchy::lookupCtor(const std::string &cls,
                           const std::vector<std::string> &paramTypes) const {
  const ClassInfo &ci = info(cls);
  if (ci.implicitCtor) {
    if (!paramTypes.empty())
      return std::nullopt;
    MethodId id{cls, cls, {}, "", true};
    return Target{cls, nullptr, id};
  }
  for (const MethodDecl &m : ci.decl->methods) {
    if (!m.isConstructor)
      continue;
    std::vector<std::string> ps;
    for (const auto &p : m.params)
      ps.push_back(p.typeName);
    if (ps == paramTypes)
      return Target{cls, &m, m.id(cls)};
  }
  return std::nullopt;
}

namespace {

struct Candidate {
  std::string definingClass;
  const MethodDecl *decl;
  std::vector<std::string> paramTypes;
};

std::string renderCall(const std::string &recv, const std::string &name,
                       const std::vector<std::string> &argTypes) {
  std::string out = recv + "." + name + "(";
  for (size_t i = 0; i < argTypes.size(); ++i) {
    if (i)
      out += ",";
    out += argTypes[i];
  }
  return out + ")";
}

} // namespace

ClassHierarchy::Target
ClassHierarchy::resolveStaticCall(const std::string &receiverType,
                                  const std::string &methodName,
                                  const std::vector<std::string> &argTypes,
                                  SourcePos pos) const {
  if (!hasClass(receiverType))
    throw NoApplicableMethod("type '" + receiverType + "' has no methods", pos);

  // Visible methods: nearest declaration wins per (name, parameter tuple).
  std::vector<Candidate> applicable;
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  for (std::string cur = receiverType; !cur.empty(); cur = parentOf(cur)) {
    for (const MethodDecl &m : info(cur).decl->methods) {
      if (m.isConstructor || m.name != methodName)
        continue;
      std::vector<std::string> ps;
      for (const auto &p : m.params)
        ps.push_back(p.typeName);
      if (!seen.insert({m.name, ps}).second)
        continue; // shadowed by a subclass declaration
      if (ps.size() != argTypes.size())
        continue;
      bool ok = true;
      for (size_t i = 0; i < ps.size(); ++i)
        if (!isSubtype(argTypes[i], ps[i])) {
          ok = false;
          break;
        }
      if (ok)
        applicable.push_back({cur, &m, std::move(ps)});
    }
  }

  if (applicable.empty())
    throw NoApplicableMethod(
        "no applicable method for " +
            renderCall(receiverType, methodName, argTypes),
        pos);

  // a more specific than b: every parameter of a is a subtype of b's.
  auto moreSpecific = [&](const Candidate &a, const Candidate &b) {
    for (size_t i = 0; i < a.paramTypes.size(); ++i)
      if (!isSubtype(a.paramTypes[i], b.paramTypes[i]))
        return false;
    return a.paramTypes != b.paramTypes;
  };

  std::vector<const Candidate *> maximal;
  for (const Candidate &c : applicable) {
    bool dominated = false;
    for (const Candidate &other : applicable)
      if (&other != &c && moreSpecific(other, c)) {
        dominated = true;
        break;
      }
    if (!dominated)
      maximal.push_back(&c);
  }

  if (maximal.size() > 1)
    throw AmbiguousCall("ambiguous call " +
                            renderCall(receiverType, methodName, argTypes),
                        pos);

  const Candidate &win = *maximal.front();
  return Target{win.definingClass, win.decl, win.decl->id(win.definingClass)};
}

ClassHierarchy::Target
ClassHierarchy::resolveCtorCall(const std::string &cls,
                                const std::vector<std::string> &argTypes,
                                SourcePos pos) const {
  const ClassInfo &ci = info(cls);
  if (ci.implicitCtor) {
    if (!argTypes.empty())
      throw NoApplicableMethod("no applicable constructor for new " + cls, pos);
    MethodId id{cls, cls, {}, "", true};
    return Target{cls, nullptr, id};
  }

  std::vector<Candidate> applicable;
  for (const MethodDecl &m : ci.decl->methods) {
    if (!m.isConstructor)
      continue;
    std::vector<std::string> ps;
    for (const auto &p : m.params)
      ps.push_back(p.typeName);
    if (ps.size() != argTypes.size())
      continue;
    bool ok = true;
    for (size_t i = 0; i < ps.size(); ++i)
      if (!isSubtype(argTypes[i], ps[i])) {
        ok = false;
        break;
      }
    if (ok)
      applicable.push_back({cls, &m, std::move(ps)});
  }

  if (applicable.empty())
    throw NoApplicableMethod("no applicable constructor for new " + cls, pos);

  auto moreSpecific = [&](const Candidate &a, const Candidate &b) {
    for (size_t i = 0; i < a.paramTypes.size(); ++i)
      if (!isSubtype(a.paramTypes[i], b.paramTypes[i]))
        return false;
    return a.paramTypes != b.paramTypes;
  };
  std::vector<const Candidate *> maximal;
  for (const Candidate &c : applicable) {
    bool dominated = false;
    for (const Candidate &other : applicable)
      if (&other != &c && moreSpecific(other, c)) {
        dominated = true;
        break;
      }
    if (!dominated)
      maximal.push_back(&c);
  }
  if (maximal.size() > 1)
    throw AmbiguousCall("ambiguous constructor call new " + cls, pos);

  const Candidate &win = *maximal.front();
  return Target{cls, win.decl, win.decl->id(cls)};
}

ClassHierarchy buildHierarchy(const Program &units) {
  ClassHierarchy h;

  for (const SourceUnit &unit : units) {
    for (const ClassDecl &c : unit.classes) {
      if (h.classes_.count(c.name))
        throw DeclarationError("duplicate class '" + c.name + "' in " +
                                   unit.path,
                               c.pos);
      ClassHierarchy::ClassInfo ci;
      ci.decl = &c;
      h.classes_.emplace(c.name, std::move(ci));
    }
  }

  // Superclass resolution.
  for (auto &[name, ci] : h.classes_) {
    const std::string &sup = ci.decl->superclass;
    if (sup.empty() || sup == kObjectType) {
      ci.parent.clear();
    } else if (h.classes_.count(sup)) {
      ci.parent = sup;
    } else {
      throw UnknownSuperclassError("class '" + name +
                                       "' extends unknown class '" + sup + "'",
                                   ci.decl->pos);
    }
  }

  // Cycle detection.
  for (const auto &[name, _] : h.classes_) {
    std::set<std::string> seen{name};
    for (std::string cur = h.parentOf(name); !cur.empty();
         cur = h.parentOf(cur)) {
      if (!seen.insert(cur).second)
        throw CycleError("inheritance cycle through class '" + name + "'",
                         h.decl(name)->pos);
    }
  }

  // Method tables and fields.
  for (auto &[name, ci] : h.classes_) {
    bool hasCtor = false;
    for (const MethodDecl &m : ci.decl->methods)
      hasCtor = hasCtor || m.isConstructor;
    ci.implicitCtor = !hasCtor;
    if (ci.implicitCtor)
      ci.methodTable.push_back(MethodId{name, name, {}, "", true});
    for (const MethodDecl &m : ci.decl->methods)
      ci.methodTable.push_back(m.id(name));
  }
  for (auto &[name, ci] : h.classes_) {
    std::vector<std::string> chain = h.ancestors(name);
    chain.push_back(name);
    for (const std::string &cls : chain) {
      for (const FieldDecl &f : h.decl(cls)->fields) {
        if (!ci.fields.emplace(f.name, f.typeName).second)
          throw DeclarationError("field '" + f.name + "' of class '" + name +
                                     "' shadows an inherited field",
                                 f.pos);
      }
    }
  }

  // Override consistency: along any chain, a repeated (name, params) pair
  // must keep the return type and staticness of the ancestor declaration.
  for (const auto &[name, ci] : h.classes_) {
    for (const MethodDecl &m : ci.decl->methods) {
      if (m.isConstructor)
        continue;
      std::vector<std::string> ps;
      for (const auto &p : m.params)
        ps.push_back(p.typeName);
      for (std::string cur = h.parentOf(name); !cur.empty();
           cur = h.parentOf(cur)) {
        for (const MethodDecl &anc : h.decl(cur)->methods) {
          if (anc.isConstructor || anc.name != m.name)
            continue;
          std::vector<std::string> aps;
          for (const auto &p : anc.params)
            aps.push_back(p.typeName);
          if (aps != ps)
            continue;
          if (anc.returnType != m.returnType)
            throw DeclarationError("method '" + name + "." + m.name +
                                       "' overrides '" + cur + "." + anc.name +
                                       "' with a different return type",
                                   m.pos);
          if (anc.isStatic != m.isStatic)
            throw DeclarationError("method '" + name + "." + m.name +
                                       "' mixes static and instance with '" +
                                       cur + "." + anc.name + "'",
                                   m.pos);
        }
      }
    }
  }

  return h;
}

} // namespace tia::minij
