#include "lexer.hpp"

#include <algorithm>
#include <cctype>

namespace featrange::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view src, const std::vector<std::string>& puncts) {
  std::vector<std::string> ordered = puncts;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    size_t start = i;
    if (ident_start(c) || (c == '$' && i + 1 < src.size() && ident_start(src[i + 1]))) {
      size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      // a trailing dot belongs to the next token
      while (j > i + 1 && src[j - 1] == '.') --j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(src.substr(start, j - start));
      advance(j - start);
      out.push_back(std::move(t));
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
      size_t j = i;
      while (j < src.size() && (digit(src[j]) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && digit(src[k])) {
          while (k < src.size() && digit(src[k])) ++k;
          j = k;
        }
      }
      t.kind = Token::Kind::Number;
      t.text = std::string(src.substr(start, j - start));
      advance(j - start);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const auto& p : ordered) {
      if (src.substr(i, p.size()) == p) {
        t.kind = Token::Kind::Punct;
        t.text = p;
        advance(p.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(t.pos, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Token::Kind::End;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

}  // namespace featrange::detail
