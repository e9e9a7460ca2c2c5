// Copyright 2026 The spq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "spq/errors.hpp"
#include "spq/spaql.hpp"

namespace spq {

namespace {

constexpr std::array<std::string_view, 18> kKeywords = {
    "SELECT", "PACKAGE", "AS",       "FROM",     "WHERE",
    "REPEAT", "SUCH",    "THAT",     "AND",      "BETWEEN",
    "MINIMIZE", "MAXIMIZE", "EXPECTED", "PROBABILITY", "OF",
    "WITH",   "SUM",     "COUNT"};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      if (at_end()) {
        out.push_back({TokenKind::kEnd, "", pos_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  unsigned char peek(std::size_t ahead = 0) const {
    return i_ + ahead < text_.size()
               ? static_cast<unsigned char>(text_[i_ + ahead])
               : 0;
  }

  void advance() {
    unsigned char c = peek();
    ++i_;
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++pos_.column;
    }
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      unsigned char c = peek();
      if (std::isspace(c)) {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind k, std::string text, SourcePos at) {
    return Token{k, std::move(text), at};
  }

  Token next() {
    SourcePos at = pos_;
    unsigned char c = peek();
    if (is_ident_start(c)) {
      std::string word;
      while (!at_end() && is_ident_char(peek())) {
        word.push_back(static_cast<char>(peek()));
        advance();
      }
      std::string upper = word;
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char ch) { return std::toupper(ch); });
      if (std::find(kKeywords.begin(), kKeywords.end(), upper) !=
          kKeywords.end()) {
        return make(TokenKind::kKeyword, upper, at);
      }
      return make(TokenKind::kIdent, word, at);
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(peek(1)))) {
      return number(at);
    }
    // Unicode <= and >= (U+2264, U+2265).
    if (c == 0xE2 && peek(1) == 0x89 && (peek(2) == 0xA4 || peek(2) == 0xA5)) {
      bool le = peek(2) == 0xA4;
      advance();
      advance();
      advance();
      return make(le ? TokenKind::kLe : TokenKind::kGe, le ? "<=" : ">=", at);
    }
    advance();
    switch (c) {
      case '(': return make(TokenKind::kLParen, "(", at);
      case ')': return make(TokenKind::kRParen, ")", at);
      case '*': return make(TokenKind::kStar, "*", at);
      case ',': return make(TokenKind::kComma, ",", at);
      case '+': return make(TokenKind::kPlus, "+", at);
      case '-': return make(TokenKind::kMinus, "-", at);
      case '/': return make(TokenKind::kSlash, "/", at);
      case ';': return make(TokenKind::kSemicolon, ";", at);
      case '.': return make(TokenKind::kDot, ".", at);
      case '=':
        if (peek() == '=') advance();
        return make(TokenKind::kEq, "=", at);
      case '<':
        if (peek() == '=') {
          advance();
          return make(TokenKind::kLe, "<=", at);
        }
        if (peek() == '>') {
          advance();
          return make(TokenKind::kNe, "<>", at);
        }
        return make(TokenKind::kLt, "<", at);
      case '>':
        if (peek() == '=') {
          advance();
          return make(TokenKind::kGe, ">=", at);
        }
        return make(TokenKind::kGt, ">", at);
      case '!':
        if (peek() == '=') {
          advance();
          return make(TokenKind::kNe, "<>", at);
        }
        break;
      default:
        break;
    }
    std::string shown = c >= 0x20 && c < 0x7F
                            ? std::string(1, static_cast<char>(c))
                            : "byte " + std::to_string(c);
    throw ParseError("unexpected character '" + shown + "'", at.line,
                     at.column);
  }

  Token number(SourcePos at) {
    std::string s;
    while (!at_end() && std::isdigit(peek())) {
      s.push_back(static_cast<char>(peek()));
      advance();
    }
    if (peek() == '.') {
      s.push_back('.');
      advance();
      while (!at_end() && std::isdigit(peek())) {
        s.push_back(static_cast<char>(peek()));
        advance();
      }
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(peek(1)) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(peek(2))))) {
      s.push_back(static_cast<char>(peek()));
      advance();
      if (peek() == '+' || peek() == '-') {
        s.push_back(static_cast<char>(peek()));
        advance();
      }
      while (!at_end() && std::isdigit(peek())) {
        s.push_back(static_cast<char>(peek()));
        advance();
      }
    }
    if (is_ident_start(peek())) {
      throw ParseError("malformed number '" + s +
                           static_cast<char>(peek()) + "'",
                       at.line, at.column);
    }
    return make(TokenKind::kNumber, s, at);
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  return Lexer(text).run();
}

}  // namespace spq
