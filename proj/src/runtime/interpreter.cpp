#include "tia/runtime/interpreter.hpp"

#include "tia/minij/canonical.hpp"
#include "tia/minij/parser.hpp"

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>

namespace tia::runtime {

using namespace minij;

std::string renderRecord(const InvocationRecord &r) {
  std::string out = r.target.className + "." + r.target.methodName + "(";
  for (size_t i = 0; i < r.target.paramTypes.size(); ++i) {
    if (i)
      out += ",";
    out += r.target.paramTypes[i];
  }
  out += ")";
  out += r.returnType.empty() ? "V" : r.returnType;
  return out;
}

std::set<MethodId> traceToMapEntry(const Trace &trace) {
  return trace.methodSet();
}

namespace {

struct ObjectInstance;
using ObjectRef = std::shared_ptr<ObjectInstance>;

struct Value {
  enum class Kind { Null, Int, Bool, Str, Obj };
  Kind kind = Kind::Null;
  long long i = 0;
  bool b = false;
  std::string s;
  ObjectRef obj;

  static Value null() { return {}; }
  static Value ofInt(long long v) { return {Kind::Int, v, false, "", nullptr}; }
  static Value ofBool(bool v) { return {Kind::Bool, 0, v, "", nullptr}; }
  static Value ofStr(std::string v) {
    return {Kind::Str, 0, false, std::move(v), nullptr};
  }
  static Value ofObj(ObjectRef o) {
    return {Kind::Obj, 0, false, "", std::move(o)};
  }
};

struct ObjectInstance {
  std::string className;
  std::map<std::string, Value> fields;
};

// Non-error control flow and faults during execution.
struct AssertSignal {
  SourcePos pos;
};
struct FaultSignal {
  std::string message;
  SourcePos pos;
};
struct TimeoutSignal {};

std::string runtimeTypeOf(const Value &v) {
  switch (v.kind) {
  case Value::Kind::Null: return kNullType;
  case Value::Kind::Int: return kIntType;
  case Value::Kind::Bool: return kBoolType;
  case Value::Kind::Str: return kStringType;
  case Value::Kind::Obj: return v.obj->className;
  }
  return kNullType;
}

std::string show(const Value &v) {
  switch (v.kind) {
  case Value::Kind::Null: return "null";
  case Value::Kind::Int: return std::to_string(v.i);
  case Value::Kind::Bool: return v.b ? "true" : "false";
  case Value::Kind::Str: return v.s;
  case Value::Kind::Obj: return v.obj->className;
  }
  return "null";
}

class Env {
public:
  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  void declare(const std::string &name, Value v) {
    scopes_.back()[name] = std::move(v);
  }

  Value *find(const std::string &name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return &f->second;
    }
    return nullptr;
  }

private:
  std::vector<std::map<std::string, Value>> scopes_;
};

class Interp {
public:
  Interp(const Program &program, const ClassHierarchy &h,
         const CheckInfo &info, const std::vector<std::string> &filter,
         long long budget)
      : program_(program), h_(h), info_(info), filter_(filter),
        budget_(budget) {}

  long long steps() const { return steps_; }
  std::vector<InvocationRecord> takeRecords() { return std::move(records_); }
  std::vector<std::string> takeOutput() { return std::move(output_); }

  void runBlockAsProcedure(const Block &body) {
    Env env;
    env.push();
    Value ret;
    execBlock(body, env, nullptr, &ret);
  }

private:
  enum class Flow { Normal, Returned };

  void step(SourcePos pos) {
    (void)pos;
    if (++steps_ >= budget_)
      throw TimeoutSignal{};
  }

  // Unbounded recursion must surface as a deterministic fault, not a real
  // stack overflow.
  struct DepthGuard {
    explicit DepthGuard(Interp &interp, SourcePos pos) : interp_(interp) {
      if (++interp_.callDepth_ > kMaxCallDepth)
        throw FaultSignal{"call stack overflow", pos};
    }
    ~DepthGuard() { --interp_.callDepth_; }
    Interp &interp_;
  };
  static constexpr int kMaxCallDepth = 2000;

  bool recordAllowed(const std::string &className) const {
    if (filter_.empty())
      return true;
    for (const auto &prefix : filter_)
      if (className.rfind(prefix, 0) == 0)
        return true;
    return false;
  }

  void record(const MethodId &id, std::vector<std::string> argTypes,
              const std::string &returnType) {
    if (recordAllowed(id.className))
      records_.push_back({id, std::move(argTypes), returnType});
  }

  const ResolvedCall &resolvedCall(const Expr &e) const {
    auto it = info_.calls.find(&e);
    assert(it != info_.calls.end() && "call site missing from check info");
    return it->second;
  }

  Flow execBlock(const Block &b, Env &env, ObjectRef thisObj, Value *ret) {
    env.push();
    for (const StmtPtr &s : b.stmts) {
      if (execStmt(*s, env, thisObj, ret) == Flow::Returned) {
        env.pop();
        return Flow::Returned;
      }
    }
    env.pop();
    return Flow::Normal;
  }

  Flow execStmt(const Stmt &s, Env &env, ObjectRef thisObj, Value *ret) {
    step(s.pos);
    switch (s.kind) {
    case Stmt::Kind::VarDecl: {
      Value v = s.expr ? eval(*s.expr, env, thisObj)
                       : defaultValue(s.typeName);
      env.declare(s.name, std::move(v));
      return Flow::Normal;
    }
    case Stmt::Kind::Assign: {
      Value v = eval(*s.expr, env, thisObj);
      auto it = info_.assignTargets.find(&s);
      assert(it != info_.assignTargets.end());
      if (it->second.kind == NameRef::Kind::Local) {
        Value *slot = env.find(s.name);
        assert(slot);
        *slot = std::move(v);
      } else {
        assert(thisObj);
        thisObj->fields[s.name] = std::move(v);
      }
      return Flow::Normal;
    }
    case Stmt::Kind::If: {
      Value c = eval(*s.expr, env, thisObj);
      if (c.b)
        return execStmt(*s.thenStmt, env, thisObj, ret);
      if (s.elseStmt)
        return execStmt(*s.elseStmt, env, thisObj, ret);
      return Flow::Normal;
    }
    case Stmt::Kind::While: {
      for (;;) {
        step(s.pos); // each condition evaluation counts
        Value c = eval(*s.expr, env, thisObj);
        if (!c.b)
          return Flow::Normal;
        if (execStmt(*s.bodyStmt, env, thisObj, ret) == Flow::Returned)
          return Flow::Returned;
      }
    }
    case Stmt::Kind::Return:
      if (s.expr)
        *ret = eval(*s.expr, env, thisObj);
      return Flow::Returned;
    case Stmt::Kind::ExprStmt:
      eval(*s.expr, env, thisObj);
      return Flow::Normal;
    case Stmt::Kind::Print:
      output_.push_back(show(eval(*s.expr, env, thisObj)));
      return Flow::Normal;
    case Stmt::Kind::Assert: {
      Value c = eval(*s.expr, env, thisObj);
      if (!c.b)
        throw AssertSignal{s.pos};
      return Flow::Normal;
    }
    case Stmt::Kind::Nested:
      return execBlock(s.block, env, thisObj, ret);
    }
    return Flow::Normal;
  }

  Value defaultValue(const std::string &type) const {
    if (type == kIntType)
      return Value::ofInt(0);
    if (type == kBoolType)
      return Value::ofBool(false);
    if (type == kStringType)
      return Value::ofStr("");
    return Value::null();
  }

  Value eval(const Expr &e, Env &env, ObjectRef thisObj) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
      return Value::ofInt(e.intValue);
    case Expr::Kind::BoolLit:
      return Value::ofBool(e.boolValue);
    case Expr::Kind::StringLit:
      return Value::ofStr(e.text);
    case Expr::Kind::NullLit:
      return Value::null();
    case Expr::Kind::This:
      return Value::ofObj(thisObj);
    case Expr::Kind::Name: {
      auto it = info_.names.find(&e);
      assert(it != info_.names.end());
      if (it->second.kind == NameRef::Kind::Local) {
        Value *slot = env.find(e.text);
        assert(slot);
        return *slot;
      }
      assert(thisObj);
      return thisObj->fields.at(e.text);
    }
    case Expr::Kind::Unary: {
      Value v = eval(*e.lhs, env, thisObj);
      if (e.uop == UnaryOp::Neg)
        return Value::ofInt(
            static_cast<long long>(0ull - static_cast<unsigned long long>(v.i)));
      return Value::ofBool(!v.b);
    }
    case Expr::Kind::Binary:
      return evalBinary(e, env, thisObj);
    case Expr::Kind::New:
      return construct(e, env, thisObj);
    case Expr::Kind::Call:
      return evalCall(e, env, thisObj);
    }
    return Value::null();
  }

  Value evalBinary(const Expr &e, Env &env, ObjectRef thisObj) {
    // Short-circuit forms first.
    if (e.bop == BinaryOp::And) {
      Value l = eval(*e.lhs, env, thisObj);
      if (!l.b)
        return Value::ofBool(false);
      return Value::ofBool(eval(*e.rhs, env, thisObj).b);
    }
    if (e.bop == BinaryOp::Or) {
      Value l = eval(*e.lhs, env, thisObj);
      if (l.b)
        return Value::ofBool(true);
      return Value::ofBool(eval(*e.rhs, env, thisObj).b);
    }

    Value l = eval(*e.lhs, env, thisObj);
    Value r = eval(*e.rhs, env, thisObj);

    auto wrap = [](unsigned long long v) { return static_cast<long long>(v); };
    auto ul = static_cast<unsigned long long>(l.i);
    auto ur = static_cast<unsigned long long>(r.i);

    switch (e.bop) {
    case BinaryOp::Add:
      if (l.kind == Value::Kind::Str)
        return Value::ofStr(l.s + r.s);
      return Value::ofInt(wrap(ul + ur));
    case BinaryOp::Sub:
      return Value::ofInt(wrap(ul - ur));
    case BinaryOp::Mul:
      return Value::ofInt(wrap(ul * ur));
    case BinaryOp::Div:
      if (r.i == 0)
        throw FaultSignal{"division by zero", e.pos};
      if (l.i == INT64_MIN && r.i == -1)
        return Value::ofInt(INT64_MIN);
      return Value::ofInt(l.i / r.i);
    case BinaryOp::Mod:
      if (r.i == 0)
        throw FaultSignal{"modulo by zero", e.pos};
      if (l.i == INT64_MIN && r.i == -1)
        return Value::ofInt(0);
      return Value::ofInt(l.i % r.i);
    case BinaryOp::Lt:
      return Value::ofBool(l.i < r.i);
    case BinaryOp::Le:
      return Value::ofBool(l.i <= r.i);
    case BinaryOp::Gt:
      return Value::ofBool(l.i > r.i);
    case BinaryOp::Ge:
      return Value::ofBool(l.i >= r.i);
    case BinaryOp::Eq:
      return Value::ofBool(valueEquals(l, r));
    case BinaryOp::Ne:
      return Value::ofBool(!valueEquals(l, r));
    default:
      break;
    }
    return Value::null();
  }

  static bool valueEquals(const Value &l, const Value &r) {
    if (l.kind != r.kind)
      return false; // includes null vs non-null
    switch (l.kind) {
    case Value::Kind::Null: return true;
    case Value::Kind::Int: return l.i == r.i;
    case Value::Kind::Bool: return l.b == r.b;
    case Value::Kind::Str: return l.s == r.s;
    case Value::Kind::Obj: return l.obj == r.obj;
    }
    return false;
  }

  std::vector<Value> evalArgs(const std::vector<ExprPtr> &args, Env &env,
                              ObjectRef thisObj) {
    std::vector<Value> out;
    out.reserve(args.size());
    for (const ExprPtr &a : args)
      out.push_back(eval(*a, env, thisObj));
    return out;
  }

  static std::vector<std::string> runtimeTypes(const std::vector<Value> &vs) {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (const Value &v : vs)
      out.push_back(runtimeTypeOf(v));
    return out;
  }

  Value construct(const Expr &e, Env &env, ObjectRef thisObj) {
    auto it = info_.ctorCalls.find(&e);
    assert(it != info_.ctorCalls.end());
    const MethodId &ctorId = it->second;

    auto obj = std::make_shared<ObjectInstance>();
    obj->className = e.text;
    for (const auto &[name, type] : h_.fieldsOf(e.text))
      obj->fields[name] = defaultValue(type);

    std::vector<Value> args = evalArgs(e.args, env, thisObj);
    invokeCtor(obj, e.text, ctorId.paramTypes, args, e.pos);
    return Value::ofObj(obj);
  }

  // Runs the constructor of `cls` on `obj`: records the entry, implicitly
  // chains to the superclass no-argument constructor, then runs the body.
  void invokeCtor(const ObjectRef &obj, const std::string &cls,
                  const std::vector<std::string> &paramTypes,
                  std::vector<Value> &args, SourcePos pos) {
    DepthGuard guard(*this, pos);
    step(pos);
    auto target = h_.lookupCtor(cls, paramTypes);
    assert(target && "constructor vanished after checking");
    record(target->id, runtimeTypes(args), "");

    const std::string &parent = h_.parentOf(cls);
    if (!parent.empty()) {
      std::vector<Value> noArgs;
      invokeCtor(obj, parent, {}, noArgs, pos);
    }

    if (!target->decl)
      return; // implicit constructor: no body
    Env env;
    env.push();
    const MethodDecl &decl = *target->decl;
    for (size_t i = 0; i < decl.params.size(); ++i)
      env.declare(decl.params[i].name, std::move(args[i]));
    Value ret;
    execBlock(decl.body, env, obj, &ret);
  }

  Value evalCall(const Expr &e, Env &env, ObjectRef thisObj) {
    const ResolvedCall &rc = resolvedCall(e);

    ObjectRef receiver;
    if (!rc.staticDispatch) {
      if (e.receiver) {
        Value recv = eval(*e.receiver, env, thisObj);
        if (recv.kind == Value::Kind::Null)
          throw FaultSignal{"method call on null", e.pos};
        receiver = recv.obj;
      } else {
        receiver = thisObj;
      }
    }

    std::vector<Value> args = evalArgs(e.args, env, thisObj);

    // Dynamic dispatch: rebind on the receiver's runtime class.
    std::string startClass =
        rc.staticDispatch ? rc.definingClass : receiver->className;
    auto target = h_.lookup(startClass, rc.methodName, rc.paramTypes);
    assert(target && target->decl && "dispatch target vanished");

    return invoke(*target, receiver, std::move(args), e.pos);
  }

  Value invoke(const ClassHierarchy::Target &target, ObjectRef receiver,
               std::vector<Value> args, SourcePos pos) {
    DepthGuard guard(*this, pos);
    step(pos);
    const MethodDecl &decl = *target.decl;
    record(target.id, runtimeTypes(args), decl.returnType);

    Env env;
    env.push();
    for (size_t i = 0; i < decl.params.size(); ++i)
      env.declare(decl.params[i].name, std::move(args[i]));

    Value ret;
    Flow flow = execBlock(decl.body, env, receiver, &ret);
    if (!decl.returnType.empty() && flow != Flow::Returned)
      throw FaultSignal{"method " + target.id.canonical() +
                            " finished without returning a value",
                        pos};
    return ret;
  }

  const Program &program_;
  const ClassHierarchy &h_;
  const CheckInfo &info_;
  const std::vector<std::string> &filter_;
  long long budget_;
  long long steps_ = 0;
  int callDepth_ = 0;
  std::vector<InvocationRecord> records_;
  std::vector<std::string> output_;
};

} // namespace

Runner::Runner(const Program &program)
    : program_(program), hierarchy_(buildHierarchy(program)),
      programInfo_(checkProgram(program, hierarchy_)) {}

TestResult Runner::runTest(const TestCase &test,
                           const std::vector<std::string> &filterPrefixes,
                           long long stepBudget) const {
  // Throws StaticCheckError before any execution when the test body does
  // not type-check against this program version.
  CheckInfo info = programInfo_;
  minij::checkTestBody(test.body, test.name, hierarchy_, info);

  TestResult result;
  result.test = test.name;
  result.trace.test = test.name;

  Interp interp(program_, hierarchy_, info, filterPrefixes, stepBudget);
  try {
    interp.runBlockAsProcedure(test.body);
    result.outcome = Outcome::Pass;
  } catch (const AssertSignal &sig) {
    result.outcome = Outcome::Fail;
    result.message = "assertion failed at " + std::to_string(sig.pos.line) +
                     ":" + std::to_string(sig.pos.col);
  } catch (const FaultSignal &sig) {
    result.outcome = Outcome::Error;
    result.message = sig.message;
  } catch (const TimeoutSignal &) {
    result.outcome = Outcome::Timeout;
    result.message = "step budget exhausted";
  }
  result.stepsUsed = interp.steps();
  result.trace.records = interp.takeRecords();
  result.output = interp.takeOutput();
  return result;
}

TestResult runTest(const Program &program, const TestCase &test,
                   const std::vector<std::string> &filterPrefixes,
                   long long stepBudget) {
  Runner runner(program);
  return runner.runTest(test, filterPrefixes, stepBudget);
}

TestSuite loadTestsFromSource(std::string_view source,
                              const std::string &path) {
  TestSuite suite;
  for (ParsedTest &t : parseTestFile(source, path)) {
    TestCase tc;
    tc.name = std::move(t.name);
    tc.sourceDigest = digestTokens(canonicalBody(t.body));
    tc.body = std::move(t.body);
    suite.push_back(std::move(tc));
  }
  return suite;
}

} // namespace tia::runtime
