#pragma once

#include "featrange/errors.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace featrange::detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

// Identifiers: [A-Za-z_$][A-Za-z0-9_.]*. Punctuation is matched longest first
// from `puncts`. "//" starts a line comment.
std::vector<Token> tokenize(std::string_view src, const std::vector<std::string>& puncts);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is(std::string_view punct) const {
    return peek().kind == Token::Kind::Punct && peek().text == punct;
  }
  bool is_ident(std::string_view word) const {
    return peek().kind == Token::Kind::Ident && peek().text == word;
  }
  bool accept(std::string_view punct) {
    if (!is(punct)) return false;
    next();
    return true;
  }
  bool accept_ident(std::string_view word) {
    if (!is_ident(word)) return false;
    next();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("unexpected " + describe(peek()), "'" + std::string(punct) + "'");
  }
  void expect_ident(std::string_view word) {
    if (!accept_ident(word)) fail("unexpected " + describe(peek()), "'" + std::string(word) + "'");
  }
  std::string ident(const char* what = "identifier") {
    if (peek().kind != Token::Kind::Ident) fail("unexpected " + describe(peek()), what);
    return next().text;
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& expected = {}) const {
    throw SyntaxError(peek().pos, msg, expected);
  }

  size_t mark() const { return pos_; }
  void reset(size_t m) { pos_ = m; }

  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace featrange::detail
