#include "pim/pi/reader.hpp"

#include <cstdlib>
#include <string>

namespace pim::pi {

namespace {

enum class Tok {
  Name,
  Number,
  At,
  Colon,
  LParen,
  RParen,
  Semi,
  Comma,
  Bang,
  Query,
  Star,
  Equals,
  End,
};

struct RToken {
  Tok kind;
  std::string text;
  double value = 0.0;
  SourceSpan span;
};

class RLexer {
 public:
  explicit RLexer(std::string_view src) : src_(src) {}

  std::vector<RToken> run(std::vector<Diagnostic>& diags) {
    std::vector<RToken> out;
    for (;;) {
      skip_space(diags);
      if (pos_ >= src_.size()) break;
      SourceSpan span{line_, col_, col_};
      char c = src_[pos_];
      if (is_name_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        span.col_end = col_ - 1;
        out.push_back(RToken{Tok::Name,
                             std::string(src_.substr(start, pos_ - start)),
                             0.0, span});
        continue;
      }
      if (c >= '0' && c <= '9') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_number_char(src_[pos_])) advance();
        span.col_end = col_ - 1;
        std::string text(src_.substr(start, pos_ - start));
        out.push_back(RToken{Tok::Number, text, std::strtod(text.c_str(),
                                                            nullptr),
                             span});
        continue;
      }
      Tok kind;
      switch (c) {
        case '@': kind = Tok::At; break;
        case ':': kind = Tok::Colon; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case ';': kind = Tok::Semi; break;
        case ',': kind = Tok::Comma; break;
        case '!': kind = Tok::Bang; break;
        case '?': kind = Tok::Query; break;
        case '*': kind = Tok::Star; break;
        case '=': kind = Tok::Equals; break;
        default:
          diags.push_back(Diagnostic{
              std::string("unexpected character '") + c + "'", span});
          advance();
          continue;
      }
      advance();
      out.push_back(RToken{kind, std::string(1, c), 0.0, span});
    }
    out.push_back(RToken{Tok::End, "", 0.0, SourceSpan{line_, col_, col_}});
    return out;
  }

 private:
  static bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '\'';
  }
  static bool is_number_char(char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' ||
           c == '+' || c == '-';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space(std::vector<Diagnostic>& diags) {
    for (;;) {
      while (pos_ < src_.size() &&
             (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' ||
              src_[pos_] == '\n')) {
        advance();
      }
      if (pos_ + 1 < src_.size() && src_[pos_] == '(' &&
          src_[pos_ + 1] == '*') {
        SourceSpan open{line_, col_, col_ + 1};
        int depth = 0;
        while (pos_ < src_.size()) {
          if (pos_ + 1 < src_.size() && src_[pos_] == '(' &&
              src_[pos_ + 1] == '*') {
            ++depth;
            advance();
            advance();
          } else if (pos_ + 1 < src_.size() && src_[pos_] == '*' &&
                     src_[pos_ + 1] == ')') {
            --depth;
            advance();
            advance();
            if (depth == 0) break;
          } else {
            advance();
          }
        }
        if (depth != 0) {
          diags.push_back(Diagnostic{"unterminated comment", open});
        }
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/// Number token that stands for an integer quantity.
bool integer_value(const RToken& tok, long& out) {
  char* end = nullptr;
  out = std::strtol(tok.text.c_str(), &end, 10);
  return end && *end == '\0';
}

struct PendingTarget {
  int def;
  int branch;
  std::string name;
  SourceSpan span;
};

class RParser {
 public:
  RParser(std::vector<RToken> tokens, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  Program run() {
    while (!at(Tok::End) && diags_.empty()) {
      if (at_keyword("directive")) {
        parse_directive();
      } else if (at_keyword("new")) {
        parse_global();
      } else if (at_keyword("let") || at_keyword("and")) {
        parse_def();
      } else if (at_keyword("run")) {
        parse_run();
      } else {
        error("expected a directive, declaration, or run statement");
      }
    }
    if (diags_.empty()) resolve_names();
    return std::move(prog_);
  }

 private:
  const RToken& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const {
    return at(Tok::Name) && peek().text == word;
  }
  const RToken& take() { return tokens_[pos_++]; }

  void error(const std::string& message) {
    diags_.push_back(Diagnostic{message, peek().span});
  }

  bool expect(Tok kind, const std::string& what) {
    if (!at(kind)) {
      error("expected " + what);
      return false;
    }
    take();
    return true;
  }

  bool expect_keyword(std::string_view word) {
    if (!at_keyword(word)) {
      error("expected '" + std::string(word) + "'");
      return false;
    }
    take();
    return true;
  }

  void parse_directive() {
    take();
    if (at_keyword("sample")) {
      take();
      if (!at(Tok::Number)) return error("expected a sample time");
      prog_.sample_time = take().value;
      return;
    }
    if (at_keyword("plot")) {
      take();
      do {
        if (!at(Tok::Name)) return error("expected a process name to plot");
        plot_names_.push_back({take().text, tokens_[pos_ - 1].span});
        if (!expect(Tok::LParen, "'('")) return;
        if (!expect(Tok::RParen, "')'")) return;
      } while (at(Tok::Semi) && (take(), true));
      return;
    }
    error("unknown directive");
  }

  /// `chan` or `chan(chan,...)`; returns the carried arity.
  bool parse_chan_type(int& arity) {
    arity = 0;
    if (!expect_keyword("chan")) return false;
    if (!at(Tok::LParen)) return true;
    take();
    do {
      int nested = 0;
      if (!parse_chan_type(nested)) return false;
      ++arity;
    } while (at(Tok::Comma) && (take(), true));
    return expect(Tok::RParen, "')'");
  }

  void parse_channel_decl(std::string& name, double& rate, int& arity) {
    take();  // new
    if (!at(Tok::Name)) return error("expected a channel name");
    name = take().text;
    if (!expect(Tok::At, "'@'")) return;
    if (!at(Tok::Number)) return error("expected a channel rate");
    rate = take().value;
    if (!expect(Tok::Colon, "':'")) return;
    parse_chan_type(arity);
  }

  void parse_global() {
    GlobalChannel g;
    parse_channel_decl(g.name, g.rate, g.arity);
    if (diags_.empty()) prog_.globals.push_back(std::move(g));
  }

  void parse_def() {
    ProcessDef def;
    def.starts_group = peek().text == "let";
    take();
    if (!at(Tok::Name)) return error("expected a process name");
    def.name = take().text;
    if (!expect(Tok::LParen, "'('")) return;
    if (!at(Tok::RParen)) {
      do {
        if (!at(Tok::Name)) return error("expected a parameter name");
        def.params.push_back(take().text);
        if (!expect(Tok::Colon, "':'")) return;
        int arity = 0;
        if (!parse_chan_type(arity)) return;
      } while (at(Tok::Comma) && (take(), true));
    }
    if (!expect(Tok::RParen, "')'")) return;
    if (!expect(Tok::Equals, "'='")) return;
    if (!expect(Tok::LParen, "'('")) return;
    if (at(Tok::RParen)) {
      take();
      prog_.defs.push_back(std::move(def));
      return;
    }
    while (at_keyword("new")) {
      LocalChannel local;
      int arity = 0;
      parse_channel_decl(local.name, local.rate, arity);
      if (!diags_.empty()) return;
      def.locals.push_back(std::move(local));
    }
    if (at_keyword("do")) {
      take();
      do {
        if (!parse_branch(def)) return;
      } while (at_keyword("or") && (take(), true));
    } else {
      if (!parse_branch(def)) return;
    }
    if (!expect(Tok::RParen, "')'")) return;
    prog_.defs.push_back(std::move(def));
  }

  bool resolve_value(const ProcessDef& def, const Branch& branch,
                     const std::string& name, ValueRef& out,
                     bool allow_recv) {
    if (allow_recv) {
      for (std::size_t i = 0; i < branch.recv_names.size(); ++i) {
        if (branch.recv_names[i] == name) {
          out = ValueRef{ValueKind::Recv, static_cast<int>(i)};
          return true;
        }
      }
    }
    for (std::size_t i = 0; i < def.locals.size(); ++i) {
      if (def.locals[i].name == name) {
        out = ValueRef{ValueKind::Local, static_cast<int>(i)};
        return true;
      }
    }
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      if (def.params[i] == name) {
        out = ValueRef{ValueKind::Param, static_cast<int>(i)};
        return true;
      }
    }
    for (std::size_t i = 0; i < prog_.globals.size(); ++i) {
      if (prog_.globals[i].name == name) {
        out = ValueRef{ValueKind::Global, static_cast<int>(i)};
        return true;
      }
    }
    error("unknown name '" + name + "'");
    return false;
  }

  bool parse_branch(ProcessDef& def) {
    Branch branch;
    if (at(Tok::Bang)) {
      take();
      branch.kind = BranchKind::Output;
      if (!at(Tok::Name)) return error("expected a channel name"), false;
      std::string chan = take().text;
      if (!resolve_value(def, branch, chan, branch.channel, false)) {
        return false;
      }
      if (at(Tok::LParen)) {
        take();
        do {
          if (!at(Tok::Name)) return error("expected a value name"), false;
          ValueRef v;
          if (!resolve_value(def, branch, take().text, v, false)) {
            return false;
          }
          branch.payload.push_back(v);
        } while (at(Tok::Comma) && (take(), true));
        if (!expect(Tok::RParen, "')'")) return false;
      }
      if (at(Tok::Star)) {
        take();
        if (!at(Tok::Number)) return error("expected an output weight"),
                                     false;
        branch.weight = take().value;
      }
    } else if (at(Tok::Query)) {
      take();
      branch.kind = BranchKind::Input;
      if (!at(Tok::Name)) return error("expected a channel name"), false;
      if (!resolve_value(def, branch, take().text, branch.channel, false)) {
        return false;
      }
      if (at(Tok::LParen)) {
        take();
        do {
          if (!at(Tok::Name)) return error("expected a binder name"), false;
          branch.recv_names.push_back(take().text);
        } while (at(Tok::Comma) && (take(), true));
        if (!expect(Tok::RParen, "')'")) return false;
      }
    } else if (at_keyword("delay")) {
      take();
      branch.kind = BranchKind::Delay;
      if (!expect(Tok::At, "'@'")) return false;
      if (!at(Tok::Number)) return error("expected a delay rate"), false;
      branch.weight = take().value;
    } else {
      error("expected '!', '?', or 'delay'");
      return false;
    }
    if (!expect(Tok::Semi, "';'")) return false;
    if (at(Tok::LParen)) {
      take();
      if (!expect(Tok::RParen, "')'")) return false;
      branch.target = -1;
      def.branches.push_back(std::move(branch));
      return true;
    }
    if (!at(Tok::Name)) return error("expected a continuation"), false;
    SourceSpan span = peek().span;
    std::string target = take().text;
    if (!expect(Tok::LParen, "'('")) return false;
    if (!at(Tok::RParen)) {
      do {
        if (!at(Tok::Name)) return error("expected an argument name"), false;
        ValueRef v;
        if (!resolve_value(def, branch, take().text, v, true)) return false;
        branch.args.push_back(v);
      } while (at(Tok::Comma) && (take(), true));
    }
    if (!expect(Tok::RParen, "')'")) return false;
    pending_.push_back(PendingTarget{static_cast<int>(prog_.defs.size()),
                                     static_cast<int>(def.branches.size()),
                                     target, span});
    def.branches.push_back(std::move(branch));
    return true;
  }

  void parse_run() {
    take();
    RunStatement run;
    if (!at(Tok::Number)) return error("expected an instance count");
    if (!integer_value(peek(), run.count)) {
      return error("instance count must be an integer");
    }
    take();
    if (!expect_keyword("of")) return;
    if (!at(Tok::Name)) return error("expected a process name");
    run_names_.push_back({take().text, tokens_[pos_ - 1].span});
    if (!expect(Tok::LParen, "'('")) return;
    if (!expect(Tok::RParen, "')'")) return;
    prog_.runs.push_back(run);
  }

  void resolve_names() {
    for (const PendingTarget& p : pending_) {
      int d = prog_.find_def(p.name);
      if (d < 0) {
        diags_.push_back(
            Diagnostic{"unknown process '" + p.name + "'", p.span});
        continue;
      }
      prog_.defs[static_cast<std::size_t>(p.def)]
          .branches[static_cast<std::size_t>(p.branch)]
          .target = d;
    }
    for (const auto& [name, span] : plot_names_) {
      int d = prog_.find_def(name);
      if (d < 0) {
        diags_.push_back(Diagnostic{"unknown process '" + name + "'", span});
        continue;
      }
      prog_.plot.push_back(d);
    }
    for (std::size_t i = 0; i < run_names_.size(); ++i) {
      int d = prog_.find_def(run_names_[i].first);
      if (d < 0) {
        diags_.push_back(Diagnostic{
            "unknown process '" + run_names_[i].first + "'",
            run_names_[i].second});
        continue;
      }
      prog_.runs[i].def = d;
    }
  }

  std::vector<RToken> tokens_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  Program prog_;
  std::vector<PendingTarget> pending_;
  std::vector<std::pair<std::string, SourceSpan>> plot_names_;
  std::vector<std::pair<std::string, SourceSpan>> run_names_;
};

}  // namespace

ReadResult read_program(std::string_view source) {
  ReadResult result;
  std::vector<RToken> tokens = RLexer(source).run(result.diagnostics);
  if (!result.diagnostics.empty()) return result;
  result.program = RParser(std::move(tokens), result.diagnostics).run();
  return result;
}

}  // namespace pim::pi
