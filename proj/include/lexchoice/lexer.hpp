#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "lexchoice/error.hpp"

// Tokenizer shared by the bracket notation, the IR format and the lexicon DSL.
namespace lexchoice::lex {

enum class Tok {
  end,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  lparen,
  rparen,
  comma,
  colon,
  label,      // #12
  label_def,  // #12=
  variable,   // ?name
  string,     // "quoted text"
  word,
  comment,    // % to end of line
};

inline std::string_view describe(Tok t) {
  switch (t) {
    case Tok::end: return "end of input";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::colon: return "':'";
    case Tok::label: return "reference";
    case Tok::label_def: return "reference definition";
    case Tok::variable: return "variable";
    case Tok::string: return "quoted string";
    case Tok::word: return "word";
    case Tok::comment: return "comment";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::end;
  std::string text;  // payload without sigils or quotes
  SourcePos pos{};
};

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_special(char c) {
  switch (c) {
    case '{': case '}': case '[': case ']': case '(': case ')':
    case ',': case '=': case '#': case '%': case '"': case '?':
      return true;
    default:
      return false;
  }
}

inline bool is_word_char(char c) { return !is_space(c) && !is_special(c); }

inline bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-';
}

// Words whose letters are all uppercase name relations (AGENT, ATTRIBUTE-OF).
inline bool looks_like_relation(std::string_view w) {
  bool letter = false;
  for (char c : w) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isupper(u)) {
      letter = true;
    } else if (!(std::isdigit(u) || c == '-' || c == '_')) {
      return false;
    }
  }
  return letter;
}

inline bool looks_like_concept(std::string_view w) {
  return !w.empty() && std::isupper(static_cast<unsigned char>(w.front()));
}

// True when `w` can be written as a bare word and read back unchanged.
inline bool is_bare_word(std::string_view w) {
  if (w.empty() || w.back() == ':') return false;
  for (char c : w)
    if (!is_word_char(c)) return false;
  return true;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto single = [&](Tok kind) {
    out.push_back({kind, std::string(1, src[i]), {line, col}});
    bump(1);
  };

  while (i < src.size()) {
    const char c = src[i];
    if (is_space(c)) {
      bump(1);
      continue;
    }
    const SourcePos pos{line, col};
    switch (c) {
      case '{': single(Tok::lbrace); continue;
      case '}': single(Tok::rbrace); continue;
      case '[': single(Tok::lbracket); continue;
      case ']': single(Tok::rbracket); continue;
      case '(': single(Tok::lparen); continue;
      case ')': single(Tok::rparen); continue;
      case ',': single(Tok::comma); continue;
      case '=': throw ParseError(pos, "unexpected '='");
      default: break;
    }
    if (c == '%') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '\n') ++j;
      std::string text(src.substr(i + 1, j - i - 1));
      const auto first = text.find_first_not_of(" \t\r");
      const auto last = text.find_last_not_of(" \t\r");
      text = first == std::string::npos ? std::string()
                                        : text.substr(first, last - first + 1);
      out.push_back({Tok::comment, std::move(text), pos});
      bump(j - i);
      continue;
    }
    if (c == '#') {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j == i + 1) throw ParseError(pos, "expected digits after '#'");
      std::string digits(src.substr(i + 1, j - i - 1));
      if (j < src.size() && src[j] == '=') {
        out.push_back({Tok::label_def, std::move(digits), pos});
        bump(j + 1 - i);
      } else {
        out.push_back({Tok::label, std::move(digits), pos});
        bump(j - i);
      }
      continue;
    }
    if (c == '?') {
      std::size_t j = i + 1;
      while (j < src.size() && is_name_char(src[j])) ++j;
      if (j == i + 1) throw ParseError(pos, "expected a variable name after '?'");
      out.push_back({Tok::variable, std::string(src.substr(i + 1, j - i - 1)), pos});
      bump(j - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        const char d = src[j];
        if (d == '\n') break;
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (j + 1 >= src.size() || src[j + 1] == '\n') break;
          text += src[j + 1];
          j += 2;
          continue;
        }
        text += d;
        ++j;
      }
      if (!closed) throw ParseError(pos, "unterminated string");
      out.push_back({Tok::string, std::move(text), pos});
      bump(j + 1 - i);
      continue;
    }
    std::size_t j = i;
    while (j < src.size() && is_word_char(src[j])) ++j;
    std::string word(src.substr(i, j - i));
    if (word.size() > 1 && word.back() == ':') {
      word.pop_back();
      out.push_back({Tok::word, std::move(word), pos});
      bump(j - 1 - i);
      single(Tok::colon);
    } else if (word == ":") {
      single(Tok::colon);
    } else {
      out.push_back({Tok::word, std::move(word), pos});
      bump(j - i);
    }
  }
  out.push_back({Tok::end, "", {line, col}});
  return out;
}

// Cursor over a token vector. Comments are skipped unless asked for.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    skip_comments();
  }

  const Token& peek() const { return tokens_[pos_]; }

  // The k-th non-comment token after the current one.
  const Token& peek_ahead(std::size_t k) const {
    std::size_t p = pos_;
    while (k > 0 && tokens_[p].kind != Tok::end) {
      ++p;
      while (tokens_[p].kind == Tok::comment) ++p;
      --k;
    }
    return tokens_[p];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view w) const {
    return peek().kind == Tok::word && peek().text == w;
  }

  Token take() {
    Token t = tokens_[pos_];
    if (t.kind != Tok::end) ++pos_;
    skip_comments();
    return t;
  }

  // Returns the comment directly after the previous token, on its line.
  const Token* trailing_comment() const {
    if (pos_ == 0) return nullptr;
    for (std::size_t k = pos_ - 1; k > 0 && tokens_[k].kind == Tok::comment; --k) {
      const Token& prev = tokens_[k - 1];
      if (prev.kind != Tok::comment)
        return tokens_[k].pos.line == prev.pos.line ? &tokens_[k] : nullptr;
    }
    return nullptr;
  }

  Token expect(Tok kind, std::string_view what = {}) {
    if (!at(kind))
      fail("expected " + std::string(what.empty() ? describe(kind) : what) +
           ", found " + found());
    return take();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "', found " + found());
    take();
  }

  // Word or quoted string.
  Token expect_name(std::string_view what) {
    if (!at(Tok::word) && !at(Tok::string))
      fail("expected " + std::string(what) + ", found " + found());
    return take();
  }

  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::word) return "'" + t.text + "'";
    return std::string(describe(t.kind));
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(peek().pos, message);
  }

 private:
  void skip_comments() {
    while (tokens_[pos_].kind == Tok::comment) ++pos_;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace lexchoice::lex
