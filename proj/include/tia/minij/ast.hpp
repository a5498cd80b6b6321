#pragma once

#include "tia/errors.hpp"
#include "tia/method_id.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tia::minij {

// Builtin type names. Any other name refers to a declared class.
inline constexpr const char *kIntType = "Int";
inline constexpr const char *kBoolType = "Bool";
inline constexpr const char *kStringType = "String";
inline constexpr const char *kObjectType = "Object";
// Compile-time type of the `null` literal; assignable to every reference
// type, never writable in source.
inline constexpr const char *kNullType = "$null";

bool isBuiltinType(const std::string &name);

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Neg, Not };

const char *binaryOpText(BinaryOp op);
const char *unaryOpText(UnaryOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind {
    IntLit,
    BoolLit,
    StringLit,
    NullLit,
    This,
    Name,   // variable, field, or class reference (resolved by the checker)
    Unary,
    Binary,
    New,
    Call,
  };

  Kind kind;
  SourcePos pos;

  long long intValue = 0;
  bool boolValue = false;
  std::string text; // StringLit: value; Name: identifier; New: class name

  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  ExprPtr lhs; // Unary operand / Binary left
  ExprPtr rhs;

  ExprPtr receiver;          // Call only; null for an unqualified call
  std::string callee;        // Call only
  std::vector<ExprPtr> args; // Call and New
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
  SourcePos pos;
  std::vector<StmtPtr> stmts;
};

struct Stmt {
  enum class Kind { VarDecl, Assign, If, While, Return, ExprStmt, Print, Assert, Nested };

  Kind kind;
  SourcePos pos;

  std::string typeName; // VarDecl
  std::string name;     // VarDecl / Assign target
  ExprPtr expr;         // init / assigned value / condition / return value / argument
  StmtPtr thenStmt;     // If
  StmtPtr elseStmt;     // If (may be null)
  StmtPtr bodyStmt;     // While
  Block block;          // Nested
};

struct Param {
  std::string typeName;
  std::string name;
  SourcePos pos;
};

struct MethodDecl {
  std::string name;
  std::vector<Param> params;
  std::string returnType; // "" for void and for constructors
  bool isConstructor = false;
  bool isStatic = false;
  std::vector<std::string> throwsList; // declaration metadata only
  Block body;
  SourcePos pos;

  MethodId id(const std::string &className) const {
    MethodId mid;
    mid.className = className;
    mid.methodName = name;
    for (const auto &p : params)
      mid.paramTypes.push_back(p.typeName);
    mid.returnType = returnType;
    mid.isConstructor = isConstructor;
    return mid;
  }
};

struct FieldDecl {
  std::string typeName;
  std::string name;
  SourcePos pos;
};

struct ClassDecl {
  std::string name;
  std::string superclass; // "" or "Object" both mean the implicit root
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  SourcePos pos;
};

struct SourceUnit {
  std::string path;
  std::vector<ClassDecl> classes;
};

using Program = std::vector<SourceUnit>;

// Deep copies; the mutator rewrites copies while the original stays shared.
ExprPtr cloneExpr(const Expr &e);
StmtPtr cloneStmt(const Stmt &s);
Block cloneBlock(const Block &b);
ClassDecl cloneClass(const ClassDecl &c);
SourceUnit cloneUnit(const SourceUnit &u);
Program cloneProgram(const Program &p);

} // namespace tia::minij
