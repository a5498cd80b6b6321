#include "tia/minij/printer.hpp"

#include "tia/minij/lexer.hpp"

namespace tia::minij {

namespace {

std::string pad(int indent) { return std::string(indent * 4, ' '); }

// Parenthesizes by precedence so the printed form re-parses to the same tree.
int precedence(const Expr &e) {
  if (e.kind == Expr::Kind::Binary) {
    switch (e.bop) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
    }
  }
  if (e.kind == Expr::Kind::Unary)
    return 7;
  return 8;
}

std::string exprText(const Expr &e);

std::string child(const Expr &parent, const Expr &sub, bool tight) {
  int pp = precedence(parent);
  int sp = precedence(sub);
  bool parens = tight ? sp <= pp : sp < pp;
  std::string t = exprText(sub);
  return parens ? "(" + t + ")" : t;
}

std::string argsText(const std::vector<ExprPtr> &args) {
  std::string out = "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i)
      out += ", ";
    out += exprText(*args[i]);
  }
  out += ")";
  return out;
}

std::string exprText(const Expr &e) {
  switch (e.kind) {
  case Expr::Kind::IntLit:
    return std::to_string(e.intValue);
  case Expr::Kind::BoolLit:
    return e.boolValue ? "true" : "false";
  case Expr::Kind::StringLit:
    return escapeStringLiteral(e.text);
  case Expr::Kind::NullLit:
    return "null";
  case Expr::Kind::This:
    return "this";
  case Expr::Kind::Name:
    return e.text;
  case Expr::Kind::Unary:
    return std::string(unaryOpText(e.uop)) + child(e, *e.lhs, false);
  case Expr::Kind::Binary:
    // Operators at one level associate left; the right child needs parens
    // when it has equal precedence.
    return child(e, *e.lhs, false) + " " + binaryOpText(e.bop) + " " +
           child(e, *e.rhs, true);
  case Expr::Kind::New:
    return "new " + e.text + argsText(e.args);
  case Expr::Kind::Call: {
    std::string out;
    if (e.receiver) {
      const Expr &r = *e.receiver;
      bool parens = precedence(r) < 8;
      out += parens ? "(" + exprText(r) + ")" : exprText(r);
      out += ".";
    }
    out += e.callee + argsText(e.args);
    return out;
  }
  }
  return "";
}

void stmtText(const Stmt &s, int indent, std::string &out);

void blockText(const Block &b, int indent, std::string &out) {
  out += "{\n";
  for (const auto &s : b.stmts)
    stmtText(*s, indent + 1, out);
  out += pad(indent) + "}";
}

void stmtText(const Stmt &s, int indent, std::string &out) {
  out += pad(indent);
  switch (s.kind) {
  case Stmt::Kind::VarDecl:
    out += s.typeName + " " + s.name;
    if (s.expr)
      out += " = " + exprText(*s.expr);
    out += ";\n";
    return;
  case Stmt::Kind::Assign:
    out += s.name + " = " + exprText(*s.expr) + ";\n";
    return;
  case Stmt::Kind::If:
    out += "if (" + exprText(*s.expr) + ")\n";
    stmtText(*s.thenStmt, indent + 1, out);
    if (s.elseStmt) {
      out += pad(indent) + "else\n";
      stmtText(*s.elseStmt, indent + 1, out);
    }
    return;
  case Stmt::Kind::While:
    out += "while (" + exprText(*s.expr) + ")\n";
    stmtText(*s.bodyStmt, indent + 1, out);
    return;
  case Stmt::Kind::Return:
    out += s.expr ? "return " + exprText(*s.expr) + ";\n" : "return;\n";
    return;
  case Stmt::Kind::ExprStmt:
    out += exprText(*s.expr) + ";\n";
    return;
  case Stmt::Kind::Print:
    out += "print(" + exprText(*s.expr) + ");\n";
    return;
  case Stmt::Kind::Assert:
    out += "assert(" + exprText(*s.expr) + ");\n";
    return;
  case Stmt::Kind::Nested:
    blockText(s.block, indent, out);
    out += "\n";
    return;
  }
}

} // namespace

std::string printExpr(const Expr &expr) { return exprText(expr); }

std::string printBlock(const Block &block, int indent) {
  std::string out;
  blockText(block, indent, out);
  return out;
}

std::string printUnit(const SourceUnit &unit) {
  std::string out;
  for (size_t ci = 0; ci < unit.classes.size(); ++ci) {
    const ClassDecl &c = unit.classes[ci];
    if (ci)
      out += "\n";
    out += "class " + c.name;
    if (!c.superclass.empty())
      out += " extends " + c.superclass;
    out += " {\n";
    for (const auto &f : c.fields)
      out += pad(1) + f.typeName + " " + f.name + ";\n";
    for (const auto &m : c.methods) {
      out += pad(1);
      if (m.isStatic)
        out += "static ";
      if (!m.isConstructor)
        out += (m.returnType.empty() ? "void" : m.returnType) + " ";
      out += m.name + "(";
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (i)
          out += ", ";
        out += m.params[i].typeName + " " + m.params[i].name;
      }
      out += ")";
      if (!m.throwsList.empty()) {
        out += " throws ";
        for (size_t i = 0; i < m.throwsList.size(); ++i) {
          if (i)
            out += ", ";
          out += m.throwsList[i];
        }
      }
      out += " " + printBlock(m.body, 1) + "\n";
    }
    out += "}\n";
  }
  return out;
}

static std::vector<std::string> lexTexts(const std::string &source) {
  std::vector<std::string> texts;
  for (const Token &t : lex(source))
    if (t.kind != Token::Kind::Eof)
      texts.push_back(t.text);
  return texts;
}

std::vector<std::string> blockTokens(const Block &block) {
  return lexTexts(printBlock(block));
}

std::vector<std::string> unitTokens(const SourceUnit &unit) {
  return lexTexts(printUnit(unit));
}

} // namespace tia::minij
