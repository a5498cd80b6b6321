#include "tia/minij/parser.hpp"

#include "tia/minij/lexer.hpp"

#include <set>

namespace tia::minij {

namespace {

class Parser {
public:
  Parser(std::string_view source, std::string path)
      : tokens_(lex(source)), path_(std::move(path)) {}

  SourceUnit parseUnit() {
    SourceUnit unit;
    unit.path = path_;
    std::set<std::string> seen;
    while (!at(Token::Kind::Eof)) {
      if (!peek().isIdent("class"))
        fail("expected 'class'");
      ClassDecl decl = parseClass();
      if (!seen.insert(decl.name).second)
        declFail("duplicate class '" + decl.name + "'", decl.pos);
      unit.classes.push_back(std::move(decl));
    }
    return unit;
  }

  std::vector<ParsedTest> parseTests() {
    std::vector<ParsedTest> tests;
    std::set<std::string> seen;
    while (!at(Token::Kind::Eof)) {
      ParsedTest t;
      t.pos = peek().pos;
      if (peek().isIdent("class"))
        declFail("class declarations are not allowed in test files", t.pos);
      t.name = expectIdent("test name");
      expectPunct("(");
      expectPunct(")");
      t.body = parseBlock();
      if (!seen.insert(t.name).second)
        declFail("duplicate test '" + t.name + "'", t.pos);
      tests.push_back(std::move(t));
    }
    return tests;
  }

private:
  const Token &peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  bool at(Token::Kind k) const { return peek().kind == k; }

  const Token &advance() {
    const Token &t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
      ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string &expected) {
    const Token &t = peek();
    std::string got = t.kind == Token::Kind::Eof ? "end of file"
                                                 : "'" + t.text + "'";
    throw SyntaxError(path_ + ":" + std::to_string(t.pos.line) + ":" +
                      std::to_string(t.pos.col) + ": " + expected + ", got " +
                      got);
  }

  [[noreturn]] void declFail(const std::string &message, SourcePos pos) {
    throw DeclarationError(path_ + ":" + std::to_string(pos.line) + ":" +
                           std::to_string(pos.col) + ": " + message);
  }

  std::string expectIdent(const std::string &what) {
    if (!at(Token::Kind::Ident) || isKeyword(peek().text))
      fail("expected " + what);
    return advance().text;
  }

  void expectPunct(std::string_view p) {
    if (!peek().isPunct(p))
      fail("expected '" + std::string(p) + "'");
    advance();
  }

  bool acceptPunct(std::string_view p) {
    if (peek().isPunct(p)) {
      advance();
      return true;
    }
    return false;
  }

  bool acceptIdent(std::string_view word) {
    if (peek().isIdent(word)) {
      advance();
      return true;
    }
    return false;
  }

  ClassDecl parseClass() {
    ClassDecl decl;
    decl.pos = peek().pos;
    advance(); // class
    decl.name = expectIdent("class name");
    if (isBuiltinType(decl.name))
      declFail("class name '" + decl.name + "' shadows a builtin type",
               decl.pos);
    if (acceptIdent("extends"))
      decl.superclass = expectIdent("superclass name");
    expectPunct("{");
    std::set<std::string> fieldNames;
    std::set<std::string> signatures;
    while (!acceptPunct("}")) {
      if (at(Token::Kind::Eof))
        fail("expected '}' before end of file");
      parseMember(decl, fieldNames, signatures);
    }
    return decl;
  }

  // member := field | constructor | method
  //   field       := Type name ';'
  //   constructor := ClassName '(' params ')' block
  //   method      := 'static'? ('void' | Type) name '(' params ')'
  //                  ('throws' Ident (',' Ident)*)? block
  void parseMember(ClassDecl &decl, std::set<std::string> &fieldNames,
                   std::set<std::string> &signatures) {
    SourcePos pos = peek().pos;

    // Constructor: class name immediately followed by '('.
    if (peek().isIdent(decl.name) && peek(1).isPunct("(")) {
      MethodDecl ctor;
      ctor.pos = pos;
      ctor.isConstructor = true;
      ctor.name = advance().text;
      ctor.params = parseParams();
      if (peek().isIdent("throws"))
        declFail("constructors cannot declare exceptions", peek().pos);
      ctor.body = parseBlock();
      addMethod(decl, std::move(ctor), signatures);
      return;
    }

    bool isStatic = acceptIdent("static");
    std::string type;
    if (acceptIdent("void"))
      type = "";
    else
      type = expectIdent("member type");
    std::string name = expectIdent("member name");

    if (peek().isPunct("(")) {
      if (name == decl.name)
        declFail("method '" + name + "' must not share its class name", pos);
      MethodDecl m;
      m.pos = pos;
      m.isStatic = isStatic;
      m.returnType = type;
      m.name = name;
      m.params = parseParams();
      if (acceptIdent("throws")) {
        m.throwsList.push_back(expectIdent("exception name"));
        while (acceptPunct(","))
          m.throwsList.push_back(expectIdent("exception name"));
      }
      m.body = parseBlock();
      addMethod(decl, std::move(m), signatures);
      return;
    }

    // Field.
    if (isStatic)
      declFail("fields cannot be static", pos);
    if (type.empty())
      declFail("field '" + name + "' cannot have type void", pos);
    expectPunct(";");
    if (!fieldNames.insert(name).second)
      declFail("duplicate field '" + name + "'", pos);
    decl.fields.push_back({type, name, pos});
  }

  void addMethod(ClassDecl &decl, MethodDecl m,
                 std::set<std::string> &signatures) {
    std::string sig = m.name + "(";
    for (const auto &p : m.params)
      sig += p.typeName + ",";
    sig += ")";
    if (!signatures.insert(sig).second)
      declFail("duplicate method signature " + decl.name + "." + sig, m.pos);
    decl.methods.push_back(std::move(m));
  }

  std::vector<Param> parseParams() {
    expectPunct("(");
    std::vector<Param> params;
    std::set<std::string> names;
    if (!peek().isPunct(")")) {
      do {
        Param p;
        p.pos = peek().pos;
        p.typeName = expectIdent("parameter type");
        p.name = expectIdent("parameter name");
        if (!names.insert(p.name).second)
          declFail("duplicate parameter '" + p.name + "'", p.pos);
        params.push_back(std::move(p));
      } while (acceptPunct(","));
    }
    expectPunct(")");
    return params;
  }

  Block parseBlock() {
    Block b;
    b.pos = peek().pos;
    expectPunct("{");
    while (!acceptPunct("}")) {
      if (at(Token::Kind::Eof))
        fail("expected '}' before end of file");
      b.stmts.push_back(parseStmt());
    }
    return b;
  }

  StmtPtr parseStmt() {
    auto s = std::make_unique<Stmt>();
    s->pos = peek().pos;

    if (peek().isPunct("{")) {
      s->kind = Stmt::Kind::Nested;
      s->block = parseBlock();
      return s;
    }
    if (acceptIdent("if")) {
      s->kind = Stmt::Kind::If;
      expectPunct("(");
      s->expr = parseExpr();
      expectPunct(")");
      s->thenStmt = parseStmt();
      if (acceptIdent("else"))
        s->elseStmt = parseStmt();
      return s;
    }
    if (acceptIdent("while")) {
      s->kind = Stmt::Kind::While;
      expectPunct("(");
      s->expr = parseExpr();
      expectPunct(")");
      s->bodyStmt = parseStmt();
      return s;
    }
    if (acceptIdent("return")) {
      s->kind = Stmt::Kind::Return;
      if (!peek().isPunct(";"))
        s->expr = parseExpr();
      expectPunct(";");
      return s;
    }
    if (peek().isIdent("print") && peek(1).isPunct("(")) {
      advance();
      s->kind = Stmt::Kind::Print;
      expectPunct("(");
      s->expr = parseExpr();
      expectPunct(")");
      expectPunct(";");
      return s;
    }
    if (peek().isIdent("assert") && peek(1).isPunct("(")) {
      advance();
      s->kind = Stmt::Kind::Assert;
      expectPunct("(");
      s->expr = parseExpr();
      expectPunct(")");
      expectPunct(";");
      return s;
    }

    // Local declaration: Type name [= expr] ;
    if (at(Token::Kind::Ident) && !isKeyword(peek().text) &&
        peek(1).kind == Token::Kind::Ident && !isKeyword(peek(1).text) &&
        (peek(2).isPunct("=") || peek(2).isPunct(";"))) {
      s->kind = Stmt::Kind::VarDecl;
      s->typeName = advance().text;
      s->name = advance().text;
      if (acceptPunct("="))
        s->expr = parseExpr();
      expectPunct(";");
      return s;
    }

    // Assignment: name = expr ;
    if (at(Token::Kind::Ident) && !isKeyword(peek().text) &&
        peek(1).isPunct("=")) {
      s->kind = Stmt::Kind::Assign;
      s->name = advance().text;
      advance(); // =
      s->expr = parseExpr();
      expectPunct(";");
      return s;
    }

    s->kind = Stmt::Kind::ExprStmt;
    s->expr = parseExpr();
    expectPunct(";");
    return s;
  }

  ExprPtr parseExpr() { return parseOr(); }

  ExprPtr parseOr() {
    auto lhs = parseAnd();
    while (peek().isPunct("||")) {
      SourcePos pos = advance().pos;
      lhs = makeBinary(BinaryOp::Or, std::move(lhs), parseAnd(), pos);
    }
    return lhs;
  }

  ExprPtr parseAnd() {
    auto lhs = parseEquality();
    while (peek().isPunct("&&")) {
      SourcePos pos = advance().pos;
      lhs = makeBinary(BinaryOp::And, std::move(lhs), parseEquality(), pos);
    }
    return lhs;
  }

  ExprPtr parseEquality() {
    auto lhs = parseRelational();
    if (peek().isPunct("==") || peek().isPunct("!=")) {
      BinaryOp op = peek().isPunct("==") ? BinaryOp::Eq : BinaryOp::Ne;
      SourcePos pos = advance().pos;
      lhs = makeBinary(op, std::move(lhs), parseRelational(), pos);
    }
    return lhs;
  }

  ExprPtr parseRelational() {
    auto lhs = parseAdditive();
    if (peek().isPunct("<") || peek().isPunct("<=") || peek().isPunct(">") ||
        peek().isPunct(">=")) {
      BinaryOp op = peek().isPunct("<")    ? BinaryOp::Lt
                    : peek().isPunct("<=") ? BinaryOp::Le
                    : peek().isPunct(">")  ? BinaryOp::Gt
                                           : BinaryOp::Ge;
      SourcePos pos = advance().pos;
      lhs = makeBinary(op, std::move(lhs), parseAdditive(), pos);
    }
    return lhs;
  }

  ExprPtr parseAdditive() {
    auto lhs = parseMultiplicative();
    while (peek().isPunct("+") || peek().isPunct("-")) {
      BinaryOp op = peek().isPunct("+") ? BinaryOp::Add : BinaryOp::Sub;
      SourcePos pos = advance().pos;
      lhs = makeBinary(op, std::move(lhs), parseMultiplicative(), pos);
    }
    return lhs;
  }

  ExprPtr parseMultiplicative() {
    auto lhs = parseUnary();
    while (peek().isPunct("*") || peek().isPunct("/") || peek().isPunct("%")) {
      BinaryOp op = peek().isPunct("*")   ? BinaryOp::Mul
                    : peek().isPunct("/") ? BinaryOp::Div
                                          : BinaryOp::Mod;
      SourcePos pos = advance().pos;
      lhs = makeBinary(op, std::move(lhs), parseUnary(), pos);
    }
    return lhs;
  }

  ExprPtr parseUnary() {
    if (peek().isPunct("-") || peek().isPunct("!")) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Unary;
      e->pos = peek().pos;
      e->uop = peek().isPunct("-") ? UnaryOp::Neg : UnaryOp::Not;
      advance();
      e->lhs = parseUnary();
      return e;
    }
    return parsePostfix();
  }

  ExprPtr parsePostfix() {
    auto e = parsePrimary();
    while (peek().isPunct(".")) {
      SourcePos pos = advance().pos;
      auto call = std::make_unique<Expr>();
      call->kind = Expr::Kind::Call;
      call->pos = pos;
      call->callee = expectIdent("method name");
      call->receiver = std::move(e);
      call->args = parseArgs();
      e = std::move(call);
    }
    return e;
  }

  std::vector<ExprPtr> parseArgs() {
    expectPunct("(");
    std::vector<ExprPtr> args;
    if (!peek().isPunct(")")) {
      do {
        args.push_back(parseExpr());
      } while (acceptPunct(","));
    }
    expectPunct(")");
    return args;
  }

  ExprPtr parsePrimary() {
    auto e = std::make_unique<Expr>();
    e->pos = peek().pos;

    if (at(Token::Kind::IntLit)) {
      e->kind = Expr::Kind::IntLit;
      e->intValue = advance().intValue;
      return e;
    }
    if (at(Token::Kind::StringLit)) {
      e->kind = Expr::Kind::StringLit;
      e->text = advance().stringValue;
      return e;
    }
    if (peek().isIdent("true") || peek().isIdent("false")) {
      e->kind = Expr::Kind::BoolLit;
      e->boolValue = peek().isIdent("true");
      advance();
      return e;
    }
    if (acceptIdent("null")) {
      e->kind = Expr::Kind::NullLit;
      return e;
    }
    if (acceptIdent("this")) {
      e->kind = Expr::Kind::This;
      return e;
    }
    if (acceptIdent("new")) {
      e->kind = Expr::Kind::New;
      e->text = expectIdent("class name");
      e->args = parseArgs();
      return e;
    }
    if (acceptPunct("(")) {
      auto inner = parseExpr();
      expectPunct(")");
      return inner;
    }
    if (at(Token::Kind::Ident) && !isKeyword(peek().text)) {
      std::string name = advance().text;
      if (peek().isPunct("(")) {
        e->kind = Expr::Kind::Call;
        e->callee = std::move(name);
        e->args = parseArgs();
        return e;
      }
      e->kind = Expr::Kind::Name;
      e->text = std::move(name);
      return e;
    }
    fail("expected expression");
  }

  ExprPtr makeBinary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Binary;
    e->pos = pos;
    e->bop = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  std::string path_;
};

} // namespace

SourceUnit parseUnit(std::string_view source, const std::string &path) {
  return Parser(source, path).parseUnit();
}

std::vector<ParsedTest> parseTestFile(std::string_view source,
                                      const std::string &path) {
  return Parser(source, path).parseTests();
}

} // namespace tia::minij
