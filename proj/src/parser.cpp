#include "pim/parser.hpp"

#include <utility>

#include "pim/format.hpp"
#include "pim/lexer.hpp"

namespace pim {

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic> diagnostics)
      : tokens_(std::move(tokens)), diagnostics_(std::move(diagnostics)) {}

  std::pair<std::vector<SurfaceSentence>, std::vector<Diagnostic>> run() {
    std::vector<SurfaceSentence> sentences;
    while (peek().kind != TokenKind::EndOfInput) {
      std::size_t before = pos_;
      SurfaceSentence sentence;
      if (parse_sentence(sentence)) {
        sentences.push_back(std::move(sentence));
      } else {
        if (pos_ == before) ++pos_;
        skip_to_sentence_start();
      }
    }
    if (sentences.empty() && diagnostics_.empty()) {
      error(peek(), "a model must contain at least one sentence");
    }
    return {std::move(sentences), std::move(diagnostics_)};
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    if (i >= tokens_.size()) i = tokens_.size() - 1;
    return tokens_[i];
  }

  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool at(TokenKind kind) const { return peek().kind == kind; }

  bool accept(TokenKind kind) {
    if (!at(kind)) return false;
    take();
    return true;
  }

  void error(const Token& where, std::string message) {
    diagnostics_.push_back({std::move(message), where.span});
  }

  bool expect(TokenKind kind) {
    if (accept(kind)) return true;
    error(peek(), std::string("expected '") + token_kind_name(kind) +
                      "', found '" +
                      (peek().kind == TokenKind::EndOfInput
                           ? "end of input"
                           : peek().text) +
                      "'");
    return false;
  }

  bool expect_name(std::string& out) {
    if (at(TokenKind::Identifier)) {
      out = take().text;
      return true;
    }
    error(peek(), std::string("expected a name, found '") +
                      (peek().kind == TokenKind::EndOfInput ? "end of input"
                                                            : peek().text) +
                      "'");
    return false;
  }

  void skip_to_sentence_start() {
    while (!at(TokenKind::EndOfInput)) {
      if (at(TokenKind::KwSite)) return;
      if (at(TokenKind::Identifier) &&
          (peek(1).kind == TokenKind::KwBecomes ||
           peek(1).kind == TokenKind::KwDecays)) {
        return;
      }
      take();
    }
  }

  bool parse_rate_clause(SurfaceSentence& s) {
    if (!accept(TokenKind::KwWith)) return true;
    if (!expect(TokenKind::KwRate)) return false;
    if (!at(TokenKind::Float)) {
      error(peek(), "expected a rate value");
      return false;
    }
    const Token& value = take();
    if (!(value.value > 0.0)) {
      error(value, "rate must be positive");
      return false;
    }
    s.rate = value.value;
    return true;
  }

  bool parse_condition_clause(SurfaceSentence& s) {
    if (!accept(TokenKind::KwIf)) return true;
    do {
      SurfaceCondition c;
      const Token& start = peek();
      if (!expect(TokenKind::KwSite)) return false;
      if (!expect_name(c.site)) return false;
      if (!expect(TokenKind::KwOn)) return false;
      if (!expect_name(c.species)) return false;
      if (!expect(TokenKind::KwIs)) return false;
      if (accept(TokenKind::KwBound)) {
        c.bound = true;
      } else if (accept(TokenKind::KwUnbound)) {
        c.bound = false;
      } else {
        error(peek(), "expected 'bound' or 'unbound'");
        return false;
      }
      c.span = start.span;
      s.conditions.push_back(std::move(c));
    } while (accept(TokenKind::KwAnd));
    return true;
  }

  bool finish_sentence(SurfaceSentence& s, const Token& first) {
    if (!parse_rate_clause(s)) return false;
    bool conditions_allowed = s.kind != SurfaceKind::Transformation &&
                              s.kind != SurfaceKind::Decay;
    if (conditions_allowed) {
      if (!parse_condition_clause(s)) return false;
    } else if (at(TokenKind::KwIf)) {
      error(peek(), "this sentence form takes no conditions");
      return false;
    }
    const Token& last = tokens_[pos_ == 0 ? 0 : pos_ - 1];
    s.span = SourceSpan{first.span.line, first.span.col_begin,
                        last.span.line == first.span.line
                            ? last.span.col_end
                            : first.span.col_end};
    return true;
  }

  bool parse_sentence(SurfaceSentence& s) {
    const Token& first = peek();
    if (accept(TokenKind::KwSite)) {
      if (!expect_name(s.left_site)) return false;
      if (!expect(TokenKind::KwOn)) return false;
      if (!expect_name(s.left_species)) return false;
      if (at(TokenKind::KwAssociates) || at(TokenKind::KwDissociates)) {
        s.kind = take().kind == TokenKind::KwAssociates
                     ? SurfaceKind::Association
                     : SurfaceKind::Dissociation;
        if (!expect(TokenKind::KwSite)) return false;
        if (!expect_name(s.right_site)) return false;
        if (!expect(TokenKind::KwOn)) return false;
        if (!expect_name(s.right_species)) return false;
      } else if (accept(TokenKind::KwGets)) {
        if (accept(TokenKind::KwPhosphorylated)) {
          s.kind = SurfaceKind::Phosphorylation;
        } else if (accept(TokenKind::KwDephosphorylated)) {
          s.kind = SurfaceKind::Dephosphorylation;
        } else {
          error(peek(), "expected 'phosphorylated' or 'dephosphorylated'");
          return false;
        }
      } else {
        error(peek(), "expected 'associates', 'dissociates' or 'gets'");
        return false;
      }
      return finish_sentence(s, first);
    }
    if (at(TokenKind::Identifier)) {
      expect_name(s.left_species);
      if (accept(TokenKind::KwBecomes)) {
        s.kind = SurfaceKind::Transformation;
        if (!expect_name(s.right_species)) return false;
      } else if (accept(TokenKind::KwDecays)) {
        s.kind = SurfaceKind::Decay;
      } else {
        error(peek(), "expected 'becomes' or 'decays'");
        return false;
      }
      return finish_sentence(s, first);
    }
    error(peek(), std::string("expected a sentence, found '") +
                      (peek().kind == TokenKind::EndOfInput ? "end of input"
                                                            : peek().text) +
                      "'");
    return false;
  }

  std::vector<Token> tokens_;
  std::vector<Diagnostic> diagnostics_;
  std::size_t pos_ = 0;
};

void check_reserved_species(const std::vector<SurfaceSentence>& sentences,
                            std::vector<Diagnostic>& diagnostics) {
  for (const SurfaceSentence& s : sentences) {
    bool hit = s.left_species == kPhosphSpecies;
    if (!hit && (s.kind == SurfaceKind::Association ||
                 s.kind == SurfaceKind::Dissociation ||
                 s.kind == SurfaceKind::Transformation)) {
      hit = s.right_species == kPhosphSpecies;
    }
    if (!hit) {
      for (const SurfaceCondition& c : s.conditions) {
        if (c.species == kPhosphSpecies) {
          hit = true;
          break;
        }
      }
    }
    if (hit) {
      diagnostics.push_back(
          {std::string("species name '") + kPhosphSpecies +
               "' is reserved for the phosphorylation forms",
           s.span});
    }
  }
}

}  // namespace

ParseResult parse(std::string_view text, const DesugarOptions& options) {
  LexResult lexed = tokenize(text);
  Parser parser(std::move(lexed.tokens), std::move(lexed.diagnostics));
  ParseResult result;
  std::tie(result.surface, result.diagnostics) = parser.run();
  check_reserved_species(result.surface, result.diagnostics);
  if (result.diagnostics.empty()) {
    result.model = build_model(result.surface, options);
  }
  return result;
}

std::string pretty_print(const Model& model) {
  std::string out;
  for (const Sentence& s : model.sentences()) {
    bool phospho = s.is_binary() && s.right &&
                   s.right->species == kPhosphSpecies &&
                   s.right->site == kPhosphSite;
    std::vector<const SiteRef*> bound;
    std::vector<const SiteRef*> unbound;
    auto body = [&](const SiteRef& ref) {
      return ref == s.left || (s.right && ref == *s.right);
    };
    switch (s.kind) {
      case SentenceKind::Association:
        out += phospho ? "site " + s.left.site + " on " + s.left.species +
                             " gets phosphorylated"
                       : "site " + s.left.site + " on " + s.left.species +
                             " associates site " + s.right->site + " on " +
                             s.right->species;
        for (const SiteRef& ref : s.pos) bound.push_back(&ref);
        for (const SiteRef& ref : s.neg) {
          if (!body(ref)) unbound.push_back(&ref);
        }
        break;
      case SentenceKind::Dissociation:
        out += phospho ? "site " + s.left.site + " on " + s.left.species +
                             " gets dephosphorylated"
                       : "site " + s.left.site + " on " + s.left.species +
                             " dissociates site " + s.right->site + " on " +
                             s.right->species;
        for (const SiteRef& ref : s.pos) {
          if (!body(ref)) bound.push_back(&ref);
        }
        for (const SiteRef& ref : s.neg) unbound.push_back(&ref);
        break;
      case SentenceKind::Transformation:
        out += s.left.species;
        out += s.right ? " becomes " + s.right->species : " decays";
        break;
    }
    out += " with rate " + format_double(s.rate);
    if (!bound.empty() || !unbound.empty()) {
      out += " if ";
      bool first = true;
      for (const SiteRef* ref : bound) {
        if (!first) out += " and ";
        out += "site " + ref->site + " on " + ref->species + " is bound";
        first = false;
      }
      for (const SiteRef* ref : unbound) {
        if (!first) out += " and ";
        out += "site " + ref->site + " on " + ref->species + " is unbound";
        first = false;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace pim
