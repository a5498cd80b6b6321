#include "tia/minij/ast.hpp"

namespace tia::minij {

bool isBuiltinType(const std::string &name) {
  return name == kIntType || name == kBoolType || name == kStringType ||
         name == kObjectType;
}

const char *binaryOpText(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  case BinaryOp::Mod: return "%";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::Eq: return "==";
  case BinaryOp::Ne: return "!=";
  case BinaryOp::And: return "&&";
  case BinaryOp::Or: return "||";
  }
  return "?";
}

const char *unaryOpText(UnaryOp op) {
  return op == UnaryOp::Neg ? "-" : "!";
}

ExprPtr cloneExpr(const Expr &e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->pos = e.pos;
  out->intValue = e.intValue;
  out->boolValue = e.boolValue;
  out->text = e.text;
  out->uop = e.uop;
  out->bop = e.bop;
  if (e.lhs)
    out->lhs = cloneExpr(*e.lhs);
  if (e.rhs)
    out->rhs = cloneExpr(*e.rhs);
  if (e.receiver)
    out->receiver = cloneExpr(*e.receiver);
  out->callee = e.callee;
  for (const auto &a : e.args)
    out->args.push_back(cloneExpr(*a));
  return out;
}

StmtPtr cloneStmt(const Stmt &s) {
  auto out = std::make_unique<Stmt>();
  out->kind = s.kind;
  out->pos = s.pos;
  out->typeName = s.typeName;
  out->name = s.name;
  if (s.expr)
    out->expr = cloneExpr(*s.expr);
  if (s.thenStmt)
    out->thenStmt = cloneStmt(*s.thenStmt);
  if (s.elseStmt)
    out->elseStmt = cloneStmt(*s.elseStmt);
  if (s.bodyStmt)
    out->bodyStmt = cloneStmt(*s.bodyStmt);
  out->block = cloneBlock(s.block);
  return out;
}

Block cloneBlock(const Block &b) {
  Block out;
  out.pos = b.pos;
  for (const auto &s : b.stmts)
    out.stmts.push_back(cloneStmt(*s));
  return out;
}

ClassDecl cloneClass(const ClassDecl &c) {
  ClassDecl out;
  out.name = c.name;
  out.superclass = c.superclass;
  out.fields = c.fields;
  out.pos = c.pos;
  for (const auto &m : c.methods) {
    MethodDecl md;
    md.name = m.name;
    md.params = m.params;
    md.returnType = m.returnType;
    md.isConstructor = m.isConstructor;
    md.isStatic = m.isStatic;
    md.throwsList = m.throwsList;
    md.body = cloneBlock(m.body);
    md.pos = m.pos;
    out.methods.push_back(std::move(md));
  }
  return out;
}

SourceUnit cloneUnit(const SourceUnit &u) {
  SourceUnit out;
  out.path = u.path;
  for (const auto &c : u.classes)
    out.classes.push_back(cloneClass(c));
  return out;
}

Program cloneProgram(const Program &p) {
  Program out;
  for (const auto &u : p)
    out.push_back(cloneUnit(u));
  return out;
}

} // namespace tia::minij
