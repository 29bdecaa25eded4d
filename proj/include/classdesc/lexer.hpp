#ifndef CLASSDESC_LEXER_HPP
#define CLASSDESC_LEXER_HPP

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "classdesc/diagnostics.hpp"

namespace classdesc {

enum class TokenKind {
  Identifier,
  Keyword,
  Punctuation,
  IntegerLiteral,
  PragmaDirective,
  EndOfInput,
};

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  std::string text;
  int line = 1;
  int column = 1;
  std::size_t offset = 0;  // byte offset into the original source

  bool is(TokenKind k) const { return kind == k; }
  bool is_punct(std::string_view p) const {
    return kind == TokenKind::Punctuation && text == p;
  }
  bool is_keyword(std::string_view k) const {
    return kind == TokenKind::Keyword && text == k;
  }
};

struct LexResult {
  std::vector<Token> tokens;
  Diagnostics diagnostics;
};

namespace detail {

inline const std::unordered_set<std::string>& keyword_set() {
  static const std::unordered_set<std::string> kw = {
      "class",     "struct",    "union",     "typedef",   "template",
      "typename",  "public",    "private",   "protected", "const",
      "static",    "virtual",   "friend",    "operator",  "inline",
      "explicit",  "constexpr", "mutable",   "volatile",  "unsigned",
      "signed",    "bool",      "char",      "short",     "int",
      "long",      "float",     "double",    "void",      "wchar_t",
      "auto",      "enum",      "namespace", "using",     "extern",
      "register",  "noexcept",  "final",     "override",  "new",
      "delete",    "return",    "if",        "else",      "for",
      "while",     "do",        "switch",    "case",      "default",
      "break",     "continue",  "sizeof",    "this",      "true",
      "false",     "nullptr",
  };
  return kw;
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace detail

/// Lex a source text into tokens. Unsupported constructs never abort the
/// scan: comments are discarded, preprocessor lines other than
/// `#pragma omit` / `#pragma single_obj_ptr` are skipped without comment,
/// and string/character literals are carried as single punctuation tokens
/// so that brace matching sees them as atoms.
inline LexResult tokenize(std::string_view source) {
  LexResult result;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;
  bool at_line_start = true;

  const auto eof = [&] { return pos >= source.size(); };
  const auto peek = [&](std::size_t ahead = 0) -> char {
    return pos + ahead < source.size() ? source[pos + ahead] : '\0';
  };
  const auto advance = [&] {
    if (source[pos] == '\n') {
      ++line;
      column = 1;
      at_line_start = true;
    } else {
      ++column;
    }
    ++pos;
  };
  // Jump to the first character of the next line; error recovery point.
  const auto skip_to_next_line = [&] {
    while (!eof() && source[pos] != '\n') advance();
    if (!eof()) advance();
  };
  const auto push = [&](TokenKind kind, std::string text, int tline, int tcol,
                        std::size_t toffset) {
    result.tokens.push_back(Token{kind, std::move(text), tline, tcol, toffset});
  };
  const auto diag = [&](Severity sev, std::string msg, int dline, int dcol) {
    result.diagnostics.push_back(Diagnostic{sev, std::move(msg), dline, dcol, {}});
  };

  while (!eof()) {
    char c = peek();

    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
      advance();
      continue;
    }

    // Preprocessor line. Only #pragma omit / #pragma single_obj_ptr are
    // meaningful; everything else (includes, defines, conditionals) is
    // dropped, continuation lines included.
    if (c == '#' && at_line_start) {
      int dline = line, dcol = column;
      std::size_t doffset = pos;
      std::string text;
      advance();  // '#'
      while (!eof()) {
        char d = peek();
        if (d == '\\' && peek(1) == '\n') {
          advance();
          advance();
          text += ' ';
          continue;
        }
        if (d == '\n') break;
        text += d;
        advance();
      }
      // Normalize to space-separated words.
      std::vector<std::string> words;
      std::string word;
      for (char d : text) {
        if (d == ' ' || d == '\t') {
          if (!word.empty()) words.push_back(std::move(word)), word.clear();
        } else {
          word += d;
        }
      }
      if (!word.empty()) words.push_back(std::move(word));
      if (words.size() >= 2 && words[0] == "pragma" &&
          (words[1] == "omit" || words[1] == "single_obj_ptr")) {
        std::string joined;
        for (std::size_t i = 1; i < words.size(); ++i) {
          if (i > 1) joined += ' ';
          joined += words[i];
        }
        push(TokenKind::PragmaDirective, std::move(joined), dline, dcol, doffset);
      }
      continue;
    }
    at_line_start = false;

    // Comments.
    if (c == '/' && peek(1) == '/') {
      while (!eof() && peek() != '\n') advance();
      continue;
    }
    if (c == '/' && peek(1) == '*') {
      int cline = line, ccol = column;
      std::size_t cpos = pos;
      advance();
      advance();
      bool closed = false;
      while (!eof()) {
        if (peek() == '*' && peek(1) == '/') {
          advance();
          advance();
          closed = true;
          break;
        }
        advance();
      }
      if (!closed) {
        diag(Severity::Error, "unterminated block comment", cline, ccol);
        // Resume on the line after the opener.
        pos = cpos;
        line = cline;
        column = ccol;
        skip_to_next_line();
      }
      continue;
    }

    // String and character literals become single atoms.
    if (c == '"' || c == '\'') {
      char quote = c;
      int qline = line, qcol = column;
      std::size_t qpos = pos;
      advance();
      bool closed = false;
      while (!eof() && peek() != '\n') {
        if (peek() == '\\' && pos + 1 < source.size()) {
          advance();
          advance();
          continue;
        }
        if (peek() == quote) {
          advance();
          closed = true;
          break;
        }
        advance();
      }
      if (!closed) {
        diag(Severity::Error,
             quote == '"' ? "unterminated string literal"
                          : "unterminated character literal",
             qline, qcol);
        skip_to_next_line();
        continue;
      }
      push(TokenKind::Punctuation, std::string(source.substr(qpos, pos - qpos)),
           qline, qcol, qpos);
      continue;
    }

    // Numeric literal: digits plus anything that can legally continue one
    // (hex, suffixes, exponents). The parser validates the spots where a
    // plain decimal integer is required.
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int nline = line, ncol = column;
      std::size_t npos = pos;
      while (!eof()) {
        char d = peek();
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '\'') {
          advance();
        } else if ((d == '+' || d == '-') && pos > npos &&
                   (source[pos - 1] == 'e' || source[pos - 1] == 'E' ||
                    source[pos - 1] == 'p' || source[pos - 1] == 'P')) {
          advance();
        } else {
          break;
        }
      }
      push(TokenKind::IntegerLiteral, std::string(source.substr(npos, pos - npos)),
           nline, ncol, npos);
      continue;
    }

    if (detail::is_ident_start(c)) {
      int iline = line, icol = column;
      std::size_t ipos = pos;
      while (!eof() && detail::is_ident_char(peek())) advance();
      std::string text(source.substr(ipos, pos - ipos));
      TokenKind kind = detail::keyword_set().count(text) ? TokenKind::Keyword
                                                         : TokenKind::Identifier;
      push(kind, std::move(text), iline, icol, ipos);
      continue;
    }

    // Punctuation; '::' is the only multi-character operator the
    // declaration grammar needs as a unit.
    {
      int pline = line, pcol = column;
      std::size_t ppos = pos;
      if (c == ':' && peek(1) == ':') {
        advance();
        advance();
        push(TokenKind::Punctuation, "::", pline, pcol, ppos);
      } else {
        advance();
        push(TokenKind::Punctuation, std::string(1, c), pline, pcol, ppos);
      }
      continue;
    }
  }

  result.tokens.push_back(Token{TokenKind::EndOfInput, "", line, column, pos});
  return result;
}

}  // namespace classdesc

#endif  // CLASSDESC_LEXER_HPP
