#pragma once

#include <string>
#include <vector>

namespace pim {

/// Half-open location of a token or sentence in the input text (1-based).
struct SourceSpan {
  int line = 0;
  int col_begin = 0;
  int col_end = 0;

  bool known() const { return line > 0; }
};

struct Diagnostic {
  std::string message;
  SourceSpan span;
};

std::string format_diagnostic(const Diagnostic& d);

}  // namespace pim
