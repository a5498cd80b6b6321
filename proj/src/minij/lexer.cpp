#include "tia/minij/lexer.hpp"

#include <array>
#include <cctype>

namespace tia::minij {

bool isKeyword(const std::string &word) {
  static const std::array<const char *, 15> kKeywords = {
      "class", "extends", "void", "new", "this", "if", "else", "while",
      "return", "print", "assert", "true", "false", "null", "static"};
  for (const char *k : kKeywords)
    if (word == k)
      return true;
  // `throws` introduces declaration metadata; treated as an identifier
  // elsewhere would allow confusing programs, so reserve it too.
  return word == "throws";
}

std::string escapeStringLiteral(const std::string &value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    default: out += c; break;
    }
  }
  out += '"';
  return out;
}

namespace {

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skipTrivia();
      SourcePos pos{line_, col_};
      if (atEnd()) {
        tokens.push_back({Token::Kind::Eof, "", "", 0, pos});
        return tokens;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
        tokens.push_back(identifier(pos));
      else if (std::isdigit(static_cast<unsigned char>(c)))
        tokens.push_back(number(pos));
      else if (c == '"')
        tokens.push_back(stringLiteral(pos));
      else
        tokens.push_back(punct(pos));
    }
  }

private:
  bool atEnd() const { return offset_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return offset_ + ahead < src_.size() ? src_[offset_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[offset_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipTrivia() {
    for (;;) {
      if (atEnd())
        return;
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!atEnd() && peek() != '\n')
          advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start{line_, col_};
        advance();
        advance();
        for (;;) {
          if (atEnd())
            throw SyntaxError("unterminated block comment", start);
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        return;
      }
    }
  }

  Token identifier(SourcePos pos) {
    std::string word;
    while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                        peek() == '_'))
      word += advance();
    return {Token::Kind::Ident, std::move(word), "", 0, pos};
  }

  Token number(SourcePos pos) {
    std::string digits;
    while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek())))
      digits += advance();
    long long value = 0;
    try {
      value = std::stoll(digits);
    } catch (const std::out_of_range &) {
      throw SyntaxError("integer literal out of range: " + digits, pos);
    }
    return {Token::Kind::IntLit, std::move(digits), "", value, pos};
  }

  Token stringLiteral(SourcePos pos) {
    advance(); // opening quote
    std::string value;
    for (;;) {
      if (atEnd() || peek() == '\n')
        throw SyntaxError("unterminated string literal", pos);
      char c = advance();
      if (c == '"')
        break;
      if (c == '\\') {
        if (atEnd())
          throw SyntaxError("unterminated string literal", pos);
        char esc = advance();
        switch (esc) {
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        case '"': value += '"'; break;
        case '\\': value += '\\'; break;
        default:
          throw SyntaxError(std::string("unknown escape sequence \\") + esc,
                            pos);
        }
      } else {
        value += c;
      }
    }
    return {Token::Kind::StringLit, escapeStringLiteral(value),
            std::move(value), 0, pos};
  }

  Token punct(SourcePos pos) {
    static const std::array<const char *, 6> kDouble = {"==", "!=", "<=", ">=",
                                                        "&&", "||"};
    char c = peek();
    char n = peek(1);
    std::string two{c, n};
    for (const char *d : kDouble) {
      if (two == d) {
        advance();
        advance();
        return {Token::Kind::Punct, two, "", 0, pos};
      }
    }
    static const std::string kSingle = "{}().,;=+-*/%<>!";
    if (kSingle.find(c) == std::string::npos)
      throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    advance();
    return {Token::Kind::Punct, std::string(1, c), "", 0, pos};
  }

  std::string_view src_;
  size_t offset_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

} // namespace tia::minij
