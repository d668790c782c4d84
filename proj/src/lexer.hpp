#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "chipvec/errors.hpp"
#include "chipvec/geom.hpp"

namespace chipvec {

// Streaming whitespace tokenizer shared by the LEF and DEF readers.
// '(' ')' ';' split into their own tokens even when glued to neighbors;
// double-quoted strings come back as one token without the quotes.
class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  struct Token {
    std::string_view value;
    int line = 0;
    bool eof() const { return value.empty() && line == 0; }
  };

  Token next() {
    if (has_peek_) {
      has_peek_ = false;
      return peeked_;
    }
    return lex();
  }

  Token peek() {
    if (!has_peek_) {
      peeked_ = lex();
      has_peek_ = true;
    }
    return peeked_;
  }

  Token expect(const char* what) {
    Token t = next();
    if (t.eof()) throw ParseError(line_, std::string("unexpected end of input, expected ") + what);
    return t;
  }

  void expect_token(std::string_view want) {
    Token t = expect(std::string(want).c_str());
    if (t.value != want)
      throw ParseError(t.line, "expected '" + std::string(want) + "', got '" +
                                   std::string(t.value) + "'");
  }

  // Skip tokens through the closing ';' of the current statement.
  void skip_statement() {
    for (;;) {
      Token t = next();
      if (t.eof() || t.value == ";") return;
    }
  }

  int line() const { return line_; }

  static std::int64_t to_int(const Token& t) {
    std::int64_t v = 0;
    const char* b = t.value.data();
    const char* e = b + t.value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      throw ParseError(t.line, "expected integer, got '" + std::string(t.value) + "'");
    return v;
  }

  static double to_double(const Token& t) {
    double v = 0;
    const char* b = t.value.data();
    const char* e = b + t.value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      throw ParseError(t.line, "expected number, got '" + std::string(t.value) + "'");
    return v;
  }

private:
  Token lex() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v' || c == '\0') {
        ++pos_;
      } else if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    if (pos_ >= text_.size()) return Token{};
    const char c = text_[pos_];
    if (c == '(' || c == ')' || c == ';') {
      Token t{text_.substr(pos_, 1), line_};
      ++pos_;
      return t;
    }
    if (c == '"') {
      const std::size_t start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      Token t{text_.substr(start, pos_ - start), line_};
      if (pos_ < text_.size()) ++pos_;  // closing quote
      return t;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '\f' || d == '\v' ||
          d == '\0' || d == '(' || d == ')' || d == ';' || d == '#')
        break;
      ++pos_;
    }
    return Token{text_.substr(start, pos_ - start), line_};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  Token peeked_{};
  bool has_peek_ = false;
};

}  // namespace chipvec
