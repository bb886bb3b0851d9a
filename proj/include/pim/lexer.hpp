#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pim/source.hpp"

namespace pim {

enum class TokenKind {
  // keywords
  KwSite,
  KwOn,
  KwAssociates,
  KwDissociates,
  KwGets,
  KwPhosphorylated,
  KwDephosphorylated,
  KwBecomes,
  KwDecays,
  KwWith,
  KwRate,
  KwIf,
  KwAnd,
  KwIs,
  KwBound,
  KwUnbound,
  // literals
  Identifier,
  Float,
  EndOfInput,
};

struct Token {
  TokenKind kind;
  std::string text;
  double value = 0.0;  // Float only
  SourceSpan span;
};

const char* token_kind_name(TokenKind kind);

struct LexResult {
  std::vector<Token> tokens;  // always terminated by EndOfInput
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Splits narrative-model text into tokens. Keywords are case-sensitive,
/// newlines carry no meaning, and `(* ... *)` comments (nesting allowed)
/// are skipped.
LexResult tokenize(std::string_view text);

/// Token class shared by species and site names: [A-Za-z][A-Za-z0-9_]*,
/// excluding the reserved keywords.
bool is_valid_name(std::string_view name);

}  // namespace pim
