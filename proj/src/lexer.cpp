#include "lexer.hpp"

#include <cctype>

namespace pwafix::detail {

std::vector<Token> tokenize(std::string_view text, CommentStyle comments) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const bool hash = comments == CommentStyle::Hash && c == '#';
    const bool slashes =
        comments == CommentStyle::DoubleSlash && c == '/' && i + 1 < text.size() && text[i + 1] == '/';
    if (hash || slashes) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int tl = line;
    const int tc = col;
    std::size_t len = 1;
    Token::Kind kind = Token::Kind::Punct;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      kind = Token::Kind::Ident;
      while (i + len < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i + len])) || text[i + len] == '_'))
        ++len;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      kind = Token::Kind::Number;
      while (i + len < text.size() && std::isdigit(static_cast<unsigned char>(text[i + len]))) ++len;
      if (i + len + 1 < text.size() && text[i + len] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[i + len + 1]))) {
        ++len;
        while (i + len < text.size() && std::isdigit(static_cast<unsigned char>(text[i + len]))) ++len;
      }
    } else if (i + 1 < text.size() && text[i + 1] == '=' &&
               (c == '<' || c == '>' || c == '=' || c == '!')) {
      len = 2;
    }
    out.push_back({kind, std::string(text.substr(i, len)), tl, tc});
    advance(len);
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Token::Kind::End) return "end of input";
  return "'" + t.text + "'";
}

const Token& TokenStream::expect(std::string_view text) {
  if (!is(text)) fail(peek(), "expected '" + std::string(text) + "', found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_ident(std::string_view what) {
  if (peek().kind != Token::Kind::Ident)
    fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_number(std::string_view what) {
  if (peek().kind != Token::Kind::Number)
    fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

Rat read_rational(TokenStream& ts) {
  const bool negative = ts.accept("-");
  Rat value = parse_rational(ts.expect_number("a number").text);
  if (ts.is("/") && ts.peek(1).kind == Token::Kind::Number) {
    ts.next();
    const Token& den = ts.next();
    const Rat d = parse_rational(den.text);
    if (d == 0) ts.fail(den, "division by zero");
    value /= d;
  }
  return negative ? Rat(-value) : value;
}

}  // namespace pwafix::detail
