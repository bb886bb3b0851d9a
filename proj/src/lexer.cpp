#include "pim/lexer.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <utility>

namespace pim {

namespace {

constexpr std::pair<const char*, TokenKind> kKeywords[] = {
    {"site", TokenKind::KwSite},
    {"on", TokenKind::KwOn},
    {"associates", TokenKind::KwAssociates},
    {"dissociates", TokenKind::KwDissociates},
    {"gets", TokenKind::KwGets},
    {"phosphorylated", TokenKind::KwPhosphorylated},
    {"dephosphorylated", TokenKind::KwDephosphorylated},
    {"becomes", TokenKind::KwBecomes},
    {"decays", TokenKind::KwDecays},
    {"with", TokenKind::KwWith},
    {"rate", TokenKind::KwRate},
    {"if", TokenKind::KwIf},
    {"and", TokenKind::KwAnd},
    {"is", TokenKind::KwIs},
    {"bound", TokenKind::KwBound},
    {"unbound", TokenKind::KwUnbound},
};

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Float: return "number";
    case TokenKind::EndOfInput: return "end of input";
    default: break;
  }
  for (const auto& [text, k] : kKeywords) {
    if (k == kind) return text;
  }
  return "?";
}

bool is_valid_name(std::string_view name) {
  if (name.empty() || !is_name_start(name[0])) return false;
  for (char c : name) {
    if (!is_name_char(c)) return false;
  }
  for (const auto& [text, kind] : kKeywords) {
    if (name == text) return false;
  }
  return true;
}

LexResult tokenize(std::string_view text) {
  LexResult result;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '(' && i + 1 < text.size() && text[i + 1] == '*') {
      SourceSpan open{line, col, col + 2};
      advance(2);
      int depth = 1;
      while (i < text.size() && depth > 0) {
        if (text[i] == '(' && i + 1 < text.size() && text[i + 1] == '*') {
          advance(2);
          ++depth;
        } else if (text[i] == '*' && i + 1 < text.size() &&
                   text[i + 1] == ')') {
          advance(2);
          --depth;
        } else {
          advance(1);
        }
      }
      if (depth > 0) {
        result.diagnostics.push_back({"unterminated comment", open});
      }
      continue;
    }
    if (is_name_start(c)) {
      int start_col = col;
      std::size_t start = i;
      while (i < text.size() && is_name_char(text[i])) advance(1);
      std::string word(text.substr(start, i - start));
      SourceSpan span{line, start_col, col};
      TokenKind kind = TokenKind::Identifier;
      for (const auto& [kw, k] : kKeywords) {
        if (word == kw) {
          kind = k;
          break;
        }
      }
      result.tokens.push_back({kind, std::move(word), 0.0, span});
      continue;
    }
    if (is_digit(c)) {
      int start_col = col;
      std::size_t start = i;
      while (i < text.size() && is_digit(text[i])) advance(1);
      if (i < text.size() && text[i] == '.') {
        advance(1);
        while (i < text.size() && is_digit(text[i])) advance(1);
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t mark = i;
        advance(1);
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) advance(1);
        if (i < text.size() && is_digit(text[i])) {
          while (i < text.size() && is_digit(text[i])) advance(1);
        } else {
          // not an exponent after all; leave the 'e' to the next token
          col -= static_cast<int>(i - mark);
          i = mark;
        }
      }
      std::string lit(text.substr(start, i - start));
      SourceSpan span{line, start_col, col};
      double value = std::strtod(lit.c_str(), nullptr);
      result.tokens.push_back({TokenKind::Float, std::move(lit), value, span});
      continue;
    }
    result.diagnostics.push_back(
        {std::string("unexpected character '") + c + "'",
         SourceSpan{line, col, col + 1}});
    advance(1);
  }
  result.tokens.push_back({TokenKind::EndOfInput, "", 0.0,
                           SourceSpan{line, col, col}});
  return result;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.message;
  if (d.span.known()) {
    out += " at line " + std::to_string(d.span.line) + ", column " +
           std::to_string(d.span.col_begin);
  }
  return out;
}

}  // namespace pim
