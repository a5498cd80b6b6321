#include "fuzz.hpp"

#include "tia/minij/checker.hpp"
#include "tia/minij/hierarchy.hpp"
#include "tia/minij/parser.hpp"
#include "tia/runtime/interpreter.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace fuzz {

using namespace tia;

namespace {

struct MethodModel {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params; // (type, name)
  std::string returnType; // "" = void
  bool isStatic = false;
  std::vector<std::string> body; // one statement per line
};

struct ClassModel {
  std::string name;
  std::string parent; // "" = root
  std::vector<MethodModel> methods;
};

struct TestModel {
  std::string name;
  std::vector<std::string> body;
};

struct ProgramModel {
  std::vector<ClassModel> classes;
  std::vector<TestModel> tests;
  // Names of methods that some generated body calls; renames and removals
  // avoid them so internal call sites never dangle.
  std::multiset<std::string> calledNames;

  std::string renderProgram() const {
    std::string out;
    for (const ClassModel &c : classes) {
      out += "class " + c.name;
      if (!c.parent.empty())
        out += " extends " + c.parent;
      out += " {\n";
      for (const MethodModel &m : c.methods) {
        out += "    ";
        if (m.isStatic)
          out += "static ";
        out += (m.returnType.empty() ? "void" : m.returnType) + " " + m.name +
               "(";
        for (size_t i = 0; i < m.params.size(); ++i) {
          if (i)
            out += ", ";
          out += m.params[i].first + " " + m.params[i].second;
        }
        out += ") {\n";
        for (const std::string &line : m.body)
          out += "        " + line + "\n";
        out += "    }\n";
      }
      out += "}\n\n";
    }
    return out;
  }

  std::string renderTests() const {
    std::string out;
    for (const TestModel &t : tests) {
      out += t.name + "() {\n";
      for (const std::string &line : t.body)
        out += "    " + line + "\n";
      out += "}\n\n";
    }
    return out;
  }
};

// A view of one callable method for generation purposes.
struct Callable {
  std::string definingClass;
  const MethodModel *method;
};

class ModelFuzzer {
public:
  explicit ModelFuzzer(std::mt19937_64 &rng) : rng_(rng) {}

  FuzzTrial makeTrial() {
    for (int attempt = 0; attempt < 50; ++attempt) {
      model_ = {};
      fresh_ = 0;
      buildModel();
      if (validate())
        break;
    }
    FuzzTrial trial;
    trial.oldProgram = model_.renderProgram();
    trial.tests = model_.renderTests();

    ProgramModel saved = model_;
    bool evolved = false;
    for (int attempt = 0; attempt < 30 && !evolved; ++attempt) {
      model_ = saved;
      int edits = 1 + static_cast<int>(rng_() % 3);
      for (int i = 0; i < edits; ++i)
        applyRandomEdit();
      evolved = validate();
    }
    if (!evolved) {
      // Guaranteed-valid fallback: append a print to some method body.
      model_ = saved;
      appendPrintEdit();
      assert(validate());
    }
    trial.newProgram = model_.renderProgram();
    return trial;
  }

private:
  std::mt19937_64 &rng_;
  ProgramModel model_;
  int fresh_ = 0;

  size_t pick(size_t n) { return rng_() % n; }
  bool chance(int percent) {
    return static_cast<int>(rng_() % 100) < percent;
  }
  std::string freshName(const std::string &base) {
    return base + std::to_string(fresh_++);
  }

  // ---- model queries -------------------------------------------------

  const ClassModel *classByName(const std::string &name) const {
    for (const ClassModel &c : model_.classes)
      if (c.name == name)
        return &c;
    return nullptr;
  }

  std::vector<std::string> chainOf(const std::string &cls) const {
    std::vector<std::string> chain;
    for (const ClassModel *c = classByName(cls); c;
         c = c->parent.empty() ? nullptr : classByName(c->parent))
      chain.push_back(c->name);
    return chain; // cls first, root last
  }

  bool isModelSubclass(const std::string &sub, const std::string &super) const {
    auto chain = chainOf(sub);
    return std::find(chain.begin(), chain.end(), super) != chain.end();
  }

  // Instance methods visible on `cls` (subclass declarations shadow by
  // exact signature).
  std::vector<Callable> visibleInstanceMethods(const std::string &cls) const {
    std::vector<Callable> out;
    std::set<std::string> seen;
    for (const std::string &name : chainOf(cls)) {
      const ClassModel *c = classByName(name);
      for (const MethodModel &m : c->methods) {
        if (m.isStatic)
          continue;
        std::string sig = m.name + "/";
        for (const auto &p : m.params)
          sig += p.first + ",";
        if (seen.insert(sig).second)
          out.push_back({c->name, &m});
      }
    }
    return out;
  }

  std::vector<std::string> subclassesOf(const std::string &cls) const {
    std::vector<std::string> out;
    for (const ClassModel &c : model_.classes)
      if (c.name != cls && isModelSubclass(c.name, cls))
        out.push_back(c.name);
    return out;
  }

  // ---- expression generation -----------------------------------------

  std::string intLit() { return std::to_string(rng_() % 21); }

  std::string intExpr(const std::vector<std::string> &intVars, int depth) {
    if (depth <= 0 || chance(40))
      return (!intVars.empty() && chance(55)) ? intVars[pick(intVars.size())]
                                              : intLit();
    static const char *ops[] = {"+", "-", "*"};
    if (chance(15))
      return "(" + intExpr(intVars, depth - 1) + ") / " +
             std::to_string(1 + rng_() % 4);
    return intExpr(intVars, depth - 1) + " " + ops[pick(3)] + " " +
           intExpr(intVars, depth - 1);
  }

  std::string boolExpr(const std::vector<std::string> &intVars) {
    static const char *cmps[] = {"<", "<=", ">", ">=", "==", "!="};
    std::string base = intExpr(intVars, 1) + " " + cmps[pick(6)] + " " +
                       intExpr(intVars, 1);
    if (chance(20))
      return base + " && " + intExpr(intVars, 0) + " < " + intLit();
    return base;
  }

  std::string stringLit() { return "\"s" + std::to_string(rng_() % 9) + "\""; }

  // A value expression for a parameter of the given type.
  std::string valueFor(const std::string &type,
                       const std::vector<std::string> &intVars) {
    if (type == "Int")
      return intExpr(intVars, 1);
    if (type == "Bool")
      return chance(50) ? "true" : "false";
    if (type == "String")
      return stringLit();
    if (type == "Object") {
      if (chance(40))
        return stringLit(); // String widens to Object
      if (chance(30) && !model_.classes.empty())
        return "new " + model_.classes[pick(model_.classes.size())].name + "()";
      return "null";
    }
    // A class type: always a live object, possibly of a subclass.
    std::vector<std::string> options = subclassesOf(type);
    options.push_back(type);
    return "new " + options[pick(options.size())] + "()";
  }

  std::string callArgs(const MethodModel &m,
                       const std::vector<std::string> &intVars) {
    std::string out = "(";
    for (size_t i = 0; i < m.params.size(); ++i) {
      if (i)
        out += ", ";
      out += valueFor(m.params[i].first, intVars);
    }
    return out + ")";
  }

  // ---- body generation -------------------------------------------------

  std::vector<std::string> genBody(const std::string &cls,
                                   const MethodModel &sig) {
    std::vector<std::string> body;
    std::vector<std::string> intVars;
    for (const auto &p : sig.params)
      if (p.first == "Int")
        intVars.push_back(p.second);

    int stmts = 1 + static_cast<int>(rng_() % 3);
    for (int i = 0; i < stmts; ++i) {
      switch (rng_() % 6) {
      case 0: {
        std::string v = freshName("a");
        body.push_back("Int " + v + " = " + intExpr(intVars, 2) + ";");
        intVars.push_back(v);
        break;
      }
      case 1:
        body.push_back("print(" + intExpr(intVars, 2) + ");");
        break;
      case 2:
        body.push_back("if (" + boolExpr(intVars) + ") { print(" +
                       intExpr(intVars, 1) + "); } else { print(" +
                       intExpr(intVars, 1) + "); }");
        break;
      case 3: {
        std::string i = freshName("i");
        std::string acc = freshName("s");
        body.push_back("Int " + acc + " = 0;");
        body.push_back("Int " + i + " = 0; while (" + i + " < " +
                       std::to_string(1 + rng_() % 4) + ") { " + acc + " = " +
                       acc + " + " + i + "; " + i + " = " + i + " + 1; }");
        intVars.push_back(acc);
        break;
      }
      case 4: {
        // Unqualified call to a visible method with a different name;
        // instance context only.
        if (sig.isStatic)
          break;
        auto visible = visibleInstanceMethods(cls);
        std::vector<Callable> pool;
        for (const Callable &c : visible)
          if (c.method->name != sig.name)
            pool.push_back(c);
        if (pool.empty())
          break;
        const Callable &callee = pool[pick(pool.size())];
        body.push_back(callee.method->name + callArgs(*callee.method, intVars) +
                       ";");
        model_.calledNames.insert(callee.method->name);
        break;
      }
      case 5: {
        // Call through a class-typed parameter.
        if (sig.isStatic)
          break;
        for (const auto &p : sig.params) {
          if (classByName(p.first)) {
            auto visible = visibleInstanceMethods(p.first);
            std::vector<Callable> pool;
            for (const Callable &c : visible)
              if (c.method->name != sig.name)
                pool.push_back(c);
            if (!pool.empty()) {
              const Callable &callee = pool[pick(pool.size())];
              body.push_back(p.second + "." + callee.method->name +
                             callArgs(*callee.method, intVars) + ";");
              model_.calledNames.insert(callee.method->name);
            }
            break;
          }
        }
        break;
      }
      }
    }

    if (!sig.returnType.empty()) {
      if (sig.returnType == "Int")
        body.push_back("return " + intExpr(intVars, 2) + ";");
      else if (sig.returnType == "Bool")
        body.push_back("return " + boolExpr(intVars) + ";");
      else if (sig.returnType == "String")
        body.push_back("return " + stringLit() + ";");
      else
        body.push_back("return " + valueFor(sig.returnType, intVars) + ";");
    }
    return body;
  }

  std::vector<std::pair<std::string, std::string>> genParams() {
    std::vector<std::pair<std::string, std::string>> params;
    int n = static_cast<int>(rng_() % 3);
    for (int i = 0; i < n; ++i) {
      std::string type;
      switch (rng_() % 6) {
      case 0:
      case 1:
      case 2: type = "Int"; break;
      case 3: type = "Bool"; break;
      case 4: type = "String"; break;
      case 5:
        type = chance(50) && !model_.classes.empty()
                   ? model_.classes[pick(model_.classes.size())].name
                   : "Object";
        break;
      }
      params.emplace_back(type, freshName("p"));
    }
    return params;
  }

  std::string genReturnType() {
    switch (rng_() % 5) {
    case 0:
    case 1: return "";
    case 2:
    case 3: return "Int";
    default: return chance(50) ? "Bool" : "String";
    }
  }

  // ---- program generation ----------------------------------------------

  void buildModel() {
    int numClasses = 2 + static_cast<int>(rng_() % 3);
    for (int i = 0; i < numClasses; ++i) {
      ClassModel cls;
      cls.name = "C" + std::to_string(i);
      if (i > 0 && chance(65))
        cls.parent = "C" + std::to_string(rng_() % i);
      model_.classes.push_back(std::move(cls));
    }

    // A deliberately overridable/overloadable family on the base class.
    {
      MethodModel act;
      act.name = "act";
      act.params = {{"Object", freshName("p")}};
      act.returnType = "Int";
      act.body = genBody(model_.classes[0].name, act);
      model_.classes[0].methods.push_back(std::move(act));
    }

    for (ClassModel &cls : model_.classes) {
      int methods = 1 + static_cast<int>(rng_() % 3);
      for (int i = 0; i < methods; ++i) {
        MethodModel m;
        m.name = freshName("m");
        m.isStatic = chance(10);
        m.params = genParams();
        m.returnType = genReturnType();
        m.body = genBody(cls.name, m);
        cls.methods.push_back(std::move(m));
      }
      // Sometimes override an inherited method.
      if (!cls.parent.empty() && chance(50)) {
        auto inherited = visibleInstanceMethods(cls.parent);
        if (!inherited.empty()) {
          const Callable &target = inherited[pick(inherited.size())];
          bool declared = false;
          for (const MethodModel &m : cls.methods)
            declared = declared || (m.name == target.method->name &&
                                    m.params.size() ==
                                        target.method->params.size());
          if (!declared) {
            MethodModel ov;
            ov.name = target.method->name;
            ov.params = target.method->params;
            for (auto &p : ov.params)
              p.second = freshName("q");
            ov.returnType = target.method->returnType;
            ov.body = genBody(cls.name, ov);
            cls.methods.push_back(std::move(ov));
          }
        }
      }
    }

    int numTests = 2 + static_cast<int>(rng_() % 5);
    for (int i = 0; i < numTests; ++i)
      model_.tests.push_back(genTest(i));
  }

  TestModel genTest(int index) {
    TestModel test;
    test.name = "t" + std::to_string(index);
    const ClassModel &impl = model_.classes[pick(model_.classes.size())];
    std::vector<std::string> chain = chainOf(impl.name);
    const std::string &staticType = chain[pick(chain.size())];
    std::string var = "v" + std::to_string(index);
    test.body.push_back(staticType + " " + var + " = new " + impl.name +
                        "();");

    auto visible = visibleInstanceMethods(staticType);
    int calls = 1 + static_cast<int>(rng_() % 3);
    for (int c = 0; c < calls && !visible.empty(); ++c) {
      const Callable &callee = visible[pick(visible.size())];
      std::string argsText = callArgs(*callee.method, {});
      if (callee.method->returnType == "Int") {
        std::string r = freshName("r");
        test.body.push_back("Int " + r + " = " + var + "." +
                            callee.method->name + argsText + ";");
        if (chance(15))
          test.body.push_back("assert(" + r + " == " + intLit() + ");");
        else if (chance(50))
          test.body.push_back("assert(" + r + " < 100000);");
        else
          test.body.push_back("print(" + r + ");");
      } else {
        test.body.push_back(var + "." + callee.method->name + argsText + ";");
      }
    }
    return test;
  }

  // ---- validation --------------------------------------------------------

  bool validate() const {
    try {
      minij::Program program;
      program.push_back(minij::parseUnit(model_.renderProgram(), "fuzz.mj"));
      auto h = minij::buildHierarchy(program);
      auto info = minij::checkProgram(program, h);
      auto tests = minij::parseTestFile(model_.renderTests(), "fuzz_tests.mj");
      for (const auto &t : tests) {
        minij::CheckInfo scratch = info;
        minij::checkTestBody(t.body, t.name, h, scratch);
      }
      return true;
    } catch (const Error &) {
      return false;
    }
  }

  // ---- edits ------------------------------------------------------------

  MethodModel *randomMethod(int *clsOut = nullptr) {
    std::vector<std::pair<int, int>> all;
    for (size_t c = 0; c < model_.classes.size(); ++c)
      for (size_t m = 0; m < model_.classes[c].methods.size(); ++m)
        all.emplace_back(static_cast<int>(c), static_cast<int>(m));
    if (all.empty())
      return nullptr;
    auto [c, m] = all[pick(all.size())];
    if (clsOut)
      *clsOut = c;
    return &model_.classes[c].methods[m];
  }

  void appendPrintEdit() {
    MethodModel *m = randomMethod();
    if (!m)
      return;
    size_t pos = m->body.size();
    if (pos > 0 && m->body.back().rfind("return ", 0) == 0)
      --pos;
    m->body.insert(m->body.begin() + pos,
                   "print(" + std::to_string(900 + fresh_++) + ");");
  }

  void tweakReturnEdit() {
    for (int attempt = 0; attempt < 10; ++attempt) {
      MethodModel *m = randomMethod();
      if (!m || m->returnType != "Int" || m->body.empty())
        continue;
      std::string &line = m->body.back();
      if (line.rfind("return ", 0) != 0)
        continue;
      std::string expr = line.substr(7, line.size() - 8);
      line = "return (" + expr + ") + 1;";
      return;
    }
    appendPrintEdit();
  }

  void addPlainMethodEdit() {
    ClassModel &cls = model_.classes[pick(model_.classes.size())];
    MethodModel m;
    m.name = freshName("m");
    m.params = genParams();
    m.returnType = genReturnType();
    m.body = genBody(cls.name, m);
    cls.methods.push_back(std::move(m));
  }

  void addOverrideEdit() {
    for (int attempt = 0; attempt < 10; ++attempt) {
      ClassModel &cls = model_.classes[pick(model_.classes.size())];
      if (cls.parent.empty())
        continue;
      auto inherited = visibleInstanceMethods(cls.parent);
      if (inherited.empty())
        continue;
      const Callable &target = inherited[pick(inherited.size())];
      bool declared = false;
      for (const MethodModel &m : cls.methods) {
        if (m.name != target.method->name ||
            m.params.size() != target.method->params.size())
          continue;
        bool same = true;
        for (size_t i = 0; i < m.params.size(); ++i)
          same = same && m.params[i].first == target.method->params[i].first;
        declared = declared || same;
      }
      if (declared)
        continue;
      MethodModel ov;
      ov.name = target.method->name;
      ov.params = target.method->params;
      for (auto &p : ov.params)
        p.second = freshName("q");
      ov.returnType = target.method->returnType;
      ov.body = genBody(cls.name, ov);
      ov.body.insert(ov.body.begin(),
                     "print(" + std::to_string(700 + fresh_++) + ");");
      cls.methods.push_back(std::move(ov));
      return;
    }
    appendPrintEdit();
  }

  void addOverloadEdit() {
    for (int attempt = 0; attempt < 15; ++attempt) {
      size_t ci = pick(model_.classes.size());
      ClassModel &owner = model_.classes[ci];
      if (owner.methods.empty())
        continue;
      const MethodModel &base = owner.methods[pick(owner.methods.size())];
      if (base.isStatic || base.params.empty())
        continue;

      // Shift one parameter position to a subtype or supertype.
      size_t pos = pick(base.params.size());
      const std::string &type = base.params[pos].first;
      std::vector<std::string> shifted;
      if (type == "Object") {
        shifted.push_back("String");
        for (const ClassModel &c : model_.classes)
          shifted.push_back(c.name);
      } else if (type == "String") {
        shifted.push_back("Object");
      } else if (const ClassModel *c = classByName(type)) {
        if (!c->parent.empty())
          shifted.push_back(c->parent);
        else
          shifted.push_back("Object");
        for (const std::string &sub : subclassesOf(type))
          shifted.push_back(sub);
      }
      if (shifted.empty())
        continue;

      MethodModel overload;
      overload.name = base.name;
      overload.params = base.params;
      overload.params[pos].first = shifted[pick(shifted.size())];
      for (auto &p : overload.params)
        p.second = freshName("q");
      overload.returnType = base.returnType;

      // The overload may land on the owner or any related class.
      std::vector<std::string> targets = chainOf(owner.name);
      for (const std::string &sub : subclassesOf(owner.name))
        targets.push_back(sub);
      ClassModel *target = nullptr;
      for (ClassModel &c : model_.classes)
        if (c.name == targets[pick(targets.size())])
          target = &c;
      if (!target)
        continue;

      bool collides = false;
      for (const MethodModel &m : target->methods) {
        if (m.name != overload.name ||
            m.params.size() != overload.params.size())
          continue;
        bool same = true;
        for (size_t i = 0; i < m.params.size(); ++i)
          same = same && m.params[i].first == overload.params[i].first;
        collides = collides || same;
      }
      if (collides)
        continue;

      overload.body = genBody(target->name, overload);
      overload.body.insert(overload.body.begin(),
                           "print(" + std::to_string(800 + fresh_++) + ");");
      target->methods.push_back(std::move(overload));
      return;
    }
    appendPrintEdit();
  }

  void removeMethodEdit() {
    for (int attempt = 0; attempt < 15; ++attempt) {
      size_t ci = pick(model_.classes.size());
      ClassModel &cls = model_.classes[ci];
      if (cls.methods.size() <= 1)
        continue;
      size_t mi = pick(cls.methods.size());
      if (model_.calledNames.count(cls.methods[mi].name))
        continue; // an internal call site would dangle
      cls.methods.erase(cls.methods.begin() + mi);
      return;
    }
    appendPrintEdit();
  }

  void renameMethodEdit() {
    for (int attempt = 0; attempt < 15; ++attempt) {
      size_t ci = pick(model_.classes.size());
      ClassModel &cls = model_.classes[ci];
      if (cls.methods.empty())
        continue;
      size_t mi = pick(cls.methods.size());
      MethodModel &m = cls.methods[mi];
      if (model_.calledNames.count(m.name))
        continue;
      m.name = freshName("renamed");
      return;
    }
    appendPrintEdit();
  }

  void applyRandomEdit() {
    switch (rng_() % 8) {
    case 0:
    case 1: appendPrintEdit(); return;
    case 2: tweakReturnEdit(); return;
    case 3: addPlainMethodEdit(); return;
    case 4: addOverrideEdit(); return;
    case 5: addOverloadEdit(); return;
    case 6: removeMethodEdit(); return;
    case 7: renameMethodEdit(); return;
    }
  }
};

} // namespace

FuzzTrial Fuzzer::nextTrial() {
  ModelFuzzer fuzzer(rng_);
  return fuzzer.makeTrial();
}

tia::mapstore::TestMap randomTestMap(std::mt19937_64 &rng) {
  using namespace tia;
  mapstore::TestMap map;
  int entries = static_cast<int>(rng() % 8);
  for (int i = 0; i < entries; ++i) {
    mapstore::TestMapEntry entry;
    entry.testName = "test" + std::to_string(rng() % 1000);
    bool ran = rng() % 5 != 0;
    if (ran) {
      static const Outcome kRan[] = {Outcome::Pass, Outcome::Fail,
                                     Outcome::Error, Outcome::Timeout};
      entry.lastOutcome = kRan[rng() % 4];
      char digest[17];
      std::snprintf(digest, sizeof(digest), "%016llx",
                    static_cast<unsigned long long>(rng()));
      entry.sourceDigest = digest;
      int methods = static_cast<int>(rng() % 6);
      for (int m = 0; m < methods; ++m) {
        MethodId id;
        id.className = "K" + std::to_string(rng() % 5);
        id.methodName = rng() % 4 == 0 ? id.className
                                       : "m" + std::to_string(rng() % 7);
        id.isConstructor = id.methodName == id.className;
        if (!id.isConstructor && rng() % 2)
          id.returnType = "Int";
        int params = static_cast<int>(rng() % 3);
        for (int p = 0; p < params; ++p)
          id.paramTypes.push_back(rng() % 2 ? "Int" : "Object");
        entry.methods.insert(id);
      }
    } else {
      entry.lastOutcome = Outcome::Never;
    }
    map.entries[entry.testName] = std::move(entry);
  }
  return map;
}

} // namespace fuzz
