// Tokenizer shared by the three input formats.
#ifndef PWAFIX_SRC_LEXER_HPP
#define PWAFIX_SRC_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "pwafix/equations.hpp"

namespace pwafix::detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  int line;
  int column;
};

enum class CommentStyle { Hash, DoubleSlash };

/// Identifiers are [A-Za-z_][A-Za-z0-9_]*; numbers are digit runs with an
/// optional fractional part; punctuation includes the two-character
/// comparisons <=, >=, ==, !=.
std::vector<Token> tokenize(std::string_view text, CommentStyle comments);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is(std::string_view punct_or_word) const {
    return peek().kind != Token::Kind::End && peek().text == punct_or_word;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view text);
  const Token& expect_ident(std::string_view what);
  const Token& expect_number(std::string_view what);

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(at.line, at.column, message);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& t);

/// Reads [-] number [/ number] as an exact rational.
Rat read_rational(TokenStream& ts);

}  // namespace pwafix::detail

#endif  // PWAFIX_SRC_LEXER_HPP
