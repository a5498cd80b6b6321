#include "tia/minij/checker.hpp"

namespace tia::minij {

namespace {

class Checker {
public:
  Checker(const ClassHierarchy &h, CheckInfo &info) : h_(h), info_(info) {}

  void checkClass(const ClassDecl &cls) {
    for (const FieldDecl &f : cls.fields)
      requireValueType(f.typeName, f.pos, "field '" + f.name + "'");

    // Every constructor of a child class implicitly invokes the parent's
    // no-argument constructor; it must exist.
    const std::string &parent = h_.parentOf(cls.name);
    if (!parent.empty() && !h_.lookupCtor(parent, {}))
      throw StaticCheckError("class '" + cls.name +
                                 "' requires a no-argument constructor in "
                                 "superclass '" +
                                 parent + "'",
                             cls.pos);

    for (const MethodDecl &m : cls.methods)
      checkMethod(cls, m);
  }

  void checkMethod(const ClassDecl &cls, const MethodDecl &m) {
    for (const Param &p : m.params)
      requireValueType(p.typeName, p.pos, "parameter '" + p.name + "'");
    if (!m.returnType.empty())
      requireValueType(m.returnType, m.pos, "return type");

    Scope scope;
    scope.enclosingClass = cls.name;
    scope.hasThis = !m.isStatic;
    scope.inStaticMethod = m.isStatic;
    scope.returnType = m.returnType;
    scope.push();
    for (const Param &p : m.params)
      scope.declare(p.name, p.typeName, p.pos);
    checkBlock(m.body, scope);
  }

  void checkTest(const Block &body, const std::string &testName) {
    Scope scope;
    scope.hasThis = false;
    scope.inStaticMethod = false;
    scope.testName = testName;
    scope.returnType = "";
    scope.push();
    checkBlock(body, scope);
  }

private:
  struct Scope {
    std::string enclosingClass; // "" in test bodies
    std::string testName;
    bool hasThis = false;
    bool inStaticMethod = false;
    std::string returnType;
    std::vector<std::map<std::string, std::string>> locals;

    void push() { locals.emplace_back(); }
    void pop() { locals.pop_back(); }

    void declare(const std::string &name, const std::string &type,
                 SourcePos pos) {
      for (const auto &frame : locals)
        if (frame.count(name))
          throw StaticCheckError("redeclaration of '" + name + "'", pos);
      locals.back().emplace(name, type);
    }

    const std::string *find(const std::string &name) const {
      for (auto it = locals.rbegin(); it != locals.rend(); ++it) {
        auto f = it->find(name);
        if (f != it->end())
          return &f->second;
      }
      return nullptr;
    }
  };

  void requireValueType(const std::string &type, SourcePos pos,
                        const std::string &what) {
    if (!h_.isType(type))
      throw StaticCheckError("unknown type '" + type + "' for " + what, pos);
  }

  void requireAssignable(const std::string &from, const std::string &to,
                         SourcePos pos, const std::string &what) {
    if (!h_.isSubtype(from, to))
      throw StaticCheckError("cannot use a value of type '" + pretty(from) +
                                 "' as '" + to + "' in " + what,
                             pos);
  }

  static std::string pretty(const std::string &type) {
    if (type == kNullType)
      return "null";
    return type.empty() ? "void" : type;
  }

  void checkBlock(const Block &block, Scope &scope) {
    scope.push();
    for (const StmtPtr &s : block.stmts)
      checkStmt(*s, scope);
    scope.pop();
  }

  void checkStmt(const Stmt &s, Scope &scope) {
    switch (s.kind) {
    case Stmt::Kind::VarDecl: {
      requireValueType(s.typeName, s.pos, "local '" + s.name + "'");
      if (s.expr) {
        std::string t = typeExpr(*s.expr, scope);
        requireNonVoid(t, s.expr->pos);
        requireAssignable(t, s.typeName, s.pos,
                          "initialization of '" + s.name + "'");
      }
      scope.declare(s.name, s.typeName, s.pos);
      return;
    }
    case Stmt::Kind::Assign: {
      NameRef target = resolveName(s.name, scope, s.pos, /*forWrite=*/true);
      info_.assignTargets.emplace(&s, target);
      std::string t = typeExpr(*s.expr, scope);
      requireNonVoid(t, s.expr->pos);
      requireAssignable(t, target.type, s.pos, "assignment to '" + s.name + "'");
      return;
    }
    case Stmt::Kind::If: {
      requireBool(typeExpr(*s.expr, scope), s.expr->pos, "if condition");
      checkStmt(*s.thenStmt, scope);
      if (s.elseStmt)
        checkStmt(*s.elseStmt, scope);
      return;
    }
    case Stmt::Kind::While: {
      requireBool(typeExpr(*s.expr, scope), s.expr->pos, "while condition");
      checkStmt(*s.bodyStmt, scope);
      return;
    }
    case Stmt::Kind::Return: {
      if (scope.returnType.empty()) {
        if (s.expr)
          throw StaticCheckError("cannot return a value here", s.pos);
        return;
      }
      if (!s.expr)
        throw StaticCheckError("non-void method must return a value", s.pos);
      std::string t = typeExpr(*s.expr, scope);
      requireNonVoid(t, s.expr->pos);
      requireAssignable(t, scope.returnType, s.pos, "return statement");
      return;
    }
    case Stmt::Kind::ExprStmt: {
      if (s.expr->kind != Expr::Kind::Call && s.expr->kind != Expr::Kind::New)
        throw StaticCheckError("expression statement must be a call", s.pos);
      typeExpr(*s.expr, scope);
      return;
    }
    case Stmt::Kind::Print: {
      std::string t = typeExpr(*s.expr, scope);
      requireNonVoid(t, s.expr->pos);
      return;
    }
    case Stmt::Kind::Assert: {
      requireBool(typeExpr(*s.expr, scope), s.expr->pos, "assert");
      return;
    }
    case Stmt::Kind::Nested:
      checkBlock(s.block, scope);
      return;
    }
  }

  void requireBool(const std::string &t, SourcePos pos,
                   const std::string &what) {
    if (t != kBoolType)
      throw StaticCheckError(what + " must be Bool, got '" + pretty(t) + "'",
                             pos);
  }

  void requireNonVoid(const std::string &t, SourcePos pos) {
    if (t.empty())
      throw StaticCheckError("void value used", pos);
  }

  NameRef resolveName(const std::string &name, Scope &scope, SourcePos pos,
                      bool forWrite) {
    if (const std::string *local = scope.find(name))
      return {NameRef::Kind::Local, *local};
    if (!scope.enclosingClass.empty() && scope.hasThis) {
      const auto &fields = h_.fieldsOf(scope.enclosingClass);
      auto it = fields.find(name);
      if (it != fields.end())
        return {NameRef::Kind::Field, it->second};
    }
    if (!forWrite && h_.hasClass(name))
      return {NameRef::Kind::Class, name};
    std::string where =
        scope.enclosingClass.empty()
            ? "test '" + scope.testName + "'"
            : "class '" + scope.enclosingClass + "'";
    throw StaticCheckError("unknown variable '" + name + "' in " + where, pos);
  }

  std::vector<std::string> typeArgs(const std::vector<ExprPtr> &args,
                                    Scope &scope) {
    std::vector<std::string> types;
    for (const ExprPtr &a : args) {
      std::string t = typeExpr(*a, scope);
      requireNonVoid(t, a->pos);
      types.push_back(std::move(t));
    }
    return types;
  }

  std::string record(const Expr &e, std::string type) {
    info_.exprTypes.emplace(&e, type);
    return type;
  }

  std::string typeExpr(const Expr &e, Scope &scope) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
      return record(e, kIntType);
    case Expr::Kind::BoolLit:
      return record(e, kBoolType);
    case Expr::Kind::StringLit:
      return record(e, kStringType);
    case Expr::Kind::NullLit:
      return record(e, kNullType);
    case Expr::Kind::This:
      if (!scope.hasThis || scope.enclosingClass.empty())
        throw StaticCheckError("'this' is not available here", e.pos);
      return record(e, scope.enclosingClass);
    case Expr::Kind::Name: {
      NameRef ref = resolveName(e.text, scope, e.pos, /*forWrite=*/false);
      if (ref.kind == NameRef::Kind::Class)
        throw StaticCheckError("class '" + e.text + "' used as a value",
                               e.pos);
      info_.names.emplace(&e, ref);
      return record(e, ref.type);
    }
    case Expr::Kind::Unary: {
      std::string t = typeExpr(*e.lhs, scope);
      if (e.uop == UnaryOp::Neg) {
        if (t != kIntType)
          throw StaticCheckError("unary '-' needs Int", e.pos);
        return record(e, kIntType);
      }
      requireBool(t, e.pos, "unary '!'");
      return record(e, kBoolType);
    }
    case Expr::Kind::Binary:
      return record(e, typeBinary(e, scope));
    case Expr::Kind::New: {
      if (!h_.hasClass(e.text))
        throw StaticCheckError("cannot instantiate unknown class '" + e.text +
                                   "'",
                               e.pos);
      auto args = typeArgs(e.args, scope);
      auto target = h_.resolveCtorCall(e.text, args, e.pos);
      info_.ctorCalls.emplace(&e, target.id);
      return record(e, e.text);
    }
    case Expr::Kind::Call:
      return record(e, typeCall(e, scope));
    }
    throw StaticCheckError("unsupported expression", e.pos);
  }

  std::string typeBinary(const Expr &e, Scope &scope) {
    std::string lt = typeExpr(*e.lhs, scope);
    std::string rt = typeExpr(*e.rhs, scope);
    requireNonVoid(lt, e.lhs->pos);
    requireNonVoid(rt, e.rhs->pos);
    switch (e.bop) {
    case BinaryOp::Add:
      if (lt == kStringType && rt == kStringType)
        return kStringType;
      [[fallthrough]];
    case BinaryOp::Sub:
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod:
      if (lt != kIntType || rt != kIntType)
        throw StaticCheckError(std::string("operator '") +
                                   binaryOpText(e.bop) + "' needs Int operands",
                               e.pos);
      return kIntType;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      if (lt != kIntType || rt != kIntType)
        throw StaticCheckError(std::string("operator '") +
                                   binaryOpText(e.bop) + "' needs Int operands",
                               e.pos);
      return kBoolType;
    case BinaryOp::Eq:
    case BinaryOp::Ne: {
      bool comparable =
          lt == rt || (h_.isReferenceType(lt) && h_.isReferenceType(rt) &&
                       (h_.isSubtype(lt, rt) || h_.isSubtype(rt, lt)));
      if (!comparable)
        throw StaticCheckError("cannot compare '" + pretty(lt) + "' with '" +
                                   pretty(rt) + "'",
                               e.pos);
      return kBoolType;
    }
    case BinaryOp::And:
    case BinaryOp::Or:
      requireBool(lt, e.lhs->pos, "logical operand");
      requireBool(rt, e.rhs->pos, "logical operand");
      return kBoolType;
    }
    throw StaticCheckError("unsupported operator", e.pos);
  }

  std::string typeCall(const Expr &e, Scope &scope) {
    auto args = typeArgs(e.args, scope);

    // Class-name receiver: a call bound statically to a static method.
    if (e.receiver && e.receiver->kind == Expr::Kind::Name) {
      const std::string &name = e.receiver->text;
      bool isValue = scope.find(name) != nullptr;
      if (!isValue && !scope.enclosingClass.empty() && scope.hasThis)
        isValue = h_.fieldsOf(scope.enclosingClass).count(name) != 0;
      if (!isValue && h_.hasClass(name)) {
        info_.names.emplace(e.receiver.get(),
                            NameRef{NameRef::Kind::Class, name});
        info_.exprTypes.emplace(e.receiver.get(), name);
        auto target = h_.resolveStaticCall(name, e.callee, args, e.pos);
        if (!target.decl->isStatic)
          throw StaticCheckError("method '" + target.id.canonical() +
                                     "' needs an object receiver",
                                 e.pos);
        return bindCall(e, target, /*staticDispatch=*/true);
      }
    }

    if (e.receiver) {
      std::string recvType = typeExpr(*e.receiver, scope);
      if (recvType == kNullType)
        throw StaticCheckError("cannot call a method on 'null'", e.pos);
      auto target = h_.resolveStaticCall(recvType, e.callee, args, e.pos);
      if (target.decl->isStatic)
        throw StaticCheckError("static method '" + target.id.canonical() +
                                   "' must be called via its class",
                               e.pos);
      return bindCall(e, target, /*staticDispatch=*/false);
    }

    // Unqualified call: implicit `this` receiver inside a class.
    if (scope.enclosingClass.empty())
      throw StaticCheckError("unqualified call '" + e.callee +
                                 "' outside a class",
                             e.pos);
    auto target = h_.resolveStaticCall(scope.enclosingClass, e.callee, args,
                                       e.pos);
    if (scope.inStaticMethod && !target.decl->isStatic)
      throw StaticCheckError("cannot call instance method '" +
                                 target.id.canonical() +
                                 "' from a static method",
                             e.pos);
    return bindCall(e, target, /*staticDispatch=*/target.decl->isStatic);
  }

  std::string bindCall(const Expr &e, const ClassHierarchy::Target &target,
                       bool staticDispatch) {
    ResolvedCall rc;
    rc.staticDispatch = staticDispatch;
    rc.definingClass = target.definingClass;
    rc.methodName = target.decl->name;
    for (const auto &p : target.decl->params)
      rc.paramTypes.push_back(p.typeName);
    rc.returnType = target.decl->returnType;
    rc.staticTarget = target.id;
    info_.calls.emplace(&e, std::move(rc));
    return target.decl->returnType;
  }

  const ClassHierarchy &h_;
  CheckInfo &info_;
};

} // namespace

CheckInfo checkProgram(const Program &units, const ClassHierarchy &h) {
  CheckInfo info;
  Checker checker(h, info);
  for (const SourceUnit &unit : units)
    for (const ClassDecl &cls : unit.classes)
      checker.checkClass(cls);
  return info;
}

void checkTestBody(const Block &body, const std::string &testName,
                   const ClassHierarchy &h, CheckInfo &info) {
  Checker checker(h, info);
  checker.checkTest(body, testName);
}

} // namespace tia::minij
