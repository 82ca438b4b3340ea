#include "lsc/text.hpp"

#include <cctype>

namespace lsc {

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string &msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + msg),
      line_(line), column_(column) {}

namespace {

enum class Tok { Lambda, Dot, LParen, RParen, LBrack, RBrack, Arrow, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

class Lexer {
public:
  explicit Lexer(std::string_view s) : src_(s) {}

  Token next() {
    skip();
    std::size_t l = line_, c = col_;
    if (pos_ >= src_.size())
      return {Tok::End, "", l, c};
    char ch = src_[pos_];
    auto one = [&](Tok k) {
      advance(1);
      return Token{k, std::string(1, ch), l, c};
    };
    switch (ch) {
    case '\\': return one(Tok::Lambda);
    case '.': return one(Tok::Dot);
    case '(': return one(Tok::LParen);
    case ')': return one(Tok::RParen);
    case '[': return one(Tok::LBrack);
    case ']': return one(Tok::RBrack);
    default: break;
    }
    if (src_.substr(pos_, 2) == "<-") {
      advance(2);
      return {Tok::Arrow, "<-", l, c};
    }
    // U+03BB in UTF-8
    if (src_.substr(pos_, 2) == "\xCE\xBB") {
      pos_ += 2;
      ++col_;
      return {Tok::Lambda, "\xCE\xBB", l, c};
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isalnum(static_cast<unsigned char>(src_[pos_])))
        advance(1);
      return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), l, c};
    }
    throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
  }

private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip() {
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance(1);
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view s) : lex_(s) { cur_ = lex_.next(); }

  Term parse() {
    Term t = term();
    if (cur_.kind != Tok::End)
      fail("unexpected '" + cur_.text + "'");
    return t;
  }

private:
  [[noreturn]] void fail(const std::string &msg) {
    if (cur_.kind == Tok::End)
      throw ParseError(cur_.line, cur_.col, msg + " at end of input");
    throw ParseError(cur_.line, cur_.col, msg);
  }

  void expect(Tok k, const char *what) {
    if (cur_.kind != k)
      fail(std::string("expected ") + what);
    cur_ = lex_.next();
  }

  std::string ident() {
    if (cur_.kind != Tok::Ident)
      fail("expected identifier");
    std::string s = cur_.text;
    cur_ = lex_.next();
    return s;
  }

  bool starts_atom() const {
    return cur_.kind == Tok::Ident || cur_.kind == Tok::LParen;
  }

  Term term() {
    if (cur_.kind == Tok::Lambda) {
      cur_ = lex_.next();
      std::string x = ident();
      expect(Tok::Dot, "'.'");
      return lam(x, term());
    }
    if (!starts_atom())
      fail("expected term");
    Term t = atom();
    while (starts_atom() || cur_.kind == Tok::Lambda) {
      // a trailing abstraction extends as far right as possible
      if (cur_.kind == Tok::Lambda)
        return app(t, term());
      t = app(t, atom());
    }
    return t;
  }

  Term atom() {
    Term t;
    if (cur_.kind == Tok::Ident) {
      t = var(ident());
    } else {
      expect(Tok::LParen, "'('");
      t = term();
      expect(Tok::RParen, "')'");
    }
    while (cur_.kind == Tok::LBrack) {
      cur_ = lex_.next();
      std::string x = ident();
      expect(Tok::Arrow, "'<-'");
      Term s = term();
      expect(Tok::RBrack, "']'");
      t = esub(t, Variable{x, 0}, s);
    }
    return t;
  }

  Lexer lex_;
  Token cur_;
};

// Precedence levels: 0 = anywhere, 1 = function position, 2 = atom.
void print_rec(const Term &t, int level, std::string &out) {
  if (t.is_var()) {
    out += t.as_var().name.str();
    return;
  }
  bool paren = false;
  if (t.is_abs())
    paren = level > 0;
  else if (t.is_app())
    paren = level > 1;
  if (paren)
    out += '(';
  if (t.is_abs()) {
    out += '\\';
    out += t.as_abs().binder.str();
    out += '.';
    print_rec(t.as_abs().body, 0, out);
  } else if (t.is_app()) {
    print_rec(t.as_app().fun, 1, out);
    out += ' ';
    print_rec(t.as_app().arg, 2, out);
  } else {
    const auto &e = t.as_esub();
    print_rec(e.body, 2, out);
    out += '[';
    out += e.binder.str();
    out += "<-";
    print_rec(e.arg, 0, out);
    out += ']';
  }
  if (paren)
    out += ')';
}

} // namespace

Term parse_term(std::string_view src) { return Parser(src).parse(); }

std::string print_term(const Term &t) {
  std::string out;
  print_rec(t, 0, out);
  return out;
}

} // namespace lsc
