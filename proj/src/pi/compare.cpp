#include "pim/pi/compare.hpp"

#include <cmath>
#include <sstream>

#include "pim/format.hpp"

namespace pim::pi {

namespace {

bool close(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * scale;
}

const char* kind_word(BranchKind kind) {
  switch (kind) {
    case BranchKind::Output: return "output";
    case BranchKind::Input: return "input";
    case BranchKind::Delay: return "delay";
  }
  return "?";
}

const char* value_word(ValueKind kind) {
  switch (kind) {
    case ValueKind::Param: return "parameter";
    case ValueKind::Local: return "local";
    case ValueKind::Recv: return "received";
    case ValueKind::Global: return "global";
  }
  return "?";
}

std::string describe(const ValueRef& v) {
  return std::string(value_word(v.kind)) + " #" + std::to_string(v.index);
}

class Comparator {
 public:
  Comparator(const Program& left, const Program& right)
      : left_(left), right_(right) {}

  CompareResult run() {
    if (!close(left_.sample_time, right_.sample_time)) {
      return fail("sample time " + format_double(left_.sample_time) +
                  " vs " + format_double(right_.sample_time));
    }
    if (left_.globals.size() != right_.globals.size()) {
      return fail(count_text("global channel", left_.globals.size(),
                             right_.globals.size()));
    }
    for (std::size_t i = 0; i < left_.globals.size(); ++i) {
      const GlobalChannel& a = left_.globals[i];
      const GlobalChannel& b = right_.globals[i];
      std::string at = "global " + a.name + " / " + b.name + ": ";
      if (!close(a.rate, b.rate)) {
        return fail(at + "rate " + format_double(a.rate) + " vs " +
                    format_double(b.rate));
      }
      if (a.arity != b.arity) {
        return fail(at + "arity " + std::to_string(a.arity) + " vs " +
                    std::to_string(b.arity));
      }
    }
    if (left_.defs.size() != right_.defs.size()) {
      return fail(count_text("definition", left_.defs.size(),
                             right_.defs.size()));
    }
    for (std::size_t i = 0; i < left_.defs.size(); ++i) {
      CompareResult r = compare_def(i);
      if (!r.equivalent) return r;
    }
    if (left_.plot != right_.plot) {
      return fail("plot directives differ");
    }
    if (left_.runs.size() != right_.runs.size()) {
      return fail(count_text("run statement", left_.runs.size(),
                             right_.runs.size()));
    }
    for (std::size_t i = 0; i < left_.runs.size(); ++i) {
      if (left_.runs[i].count != right_.runs[i].count ||
          left_.runs[i].def != right_.runs[i].def) {
        return fail("run statement " + std::to_string(i + 1) + " differs");
      }
    }
    return CompareResult{true, ""};
  }

 private:
  static CompareResult fail(const std::string& why) {
    return CompareResult{false, why};
  }

  static std::string count_text(const std::string& what, std::size_t a,
                                std::size_t b) {
    return std::to_string(a) + " " + what + "(s) vs " + std::to_string(b);
  }

  CompareResult compare_def(std::size_t i) {
    const ProcessDef& a = left_.defs[i];
    const ProcessDef& b = right_.defs[i];
    std::string at = "definition " + std::to_string(i + 1) + " (" + a.name +
                     " / " + b.name + "): ";
    if (a.params.size() != b.params.size()) {
      return fail(at +
                  count_text("parameter", a.params.size(), b.params.size()));
    }
    if (a.locals.size() != b.locals.size()) {
      return fail(at + count_text("local channel", a.locals.size(),
                                  b.locals.size()));
    }
    for (std::size_t k = 0; k < a.locals.size(); ++k) {
      if (!close(a.locals[k].rate, b.locals[k].rate)) {
        return fail(at + "local " + a.locals[k].name + " / " +
                    b.locals[k].name + " rate " +
                    format_double(a.locals[k].rate) + " vs " +
                    format_double(b.locals[k].rate));
      }
    }
    if (a.branches.size() != b.branches.size()) {
      return fail(at +
                  count_text("branch", a.branches.size(), b.branches.size()));
    }
    for (std::size_t k = 0; k < a.branches.size(); ++k) {
      const Branch& x = a.branches[k];
      const Branch& y = b.branches[k];
      std::string here = at + "branch " + std::to_string(k + 1) + ": ";
      if (x.kind != y.kind) {
        return fail(here + std::string(kind_word(x.kind)) + " vs " +
                    kind_word(y.kind));
      }
      if (x.kind != BranchKind::Delay && x.channel != y.channel) {
        return fail(here + "channel " + describe(x.channel) + " vs " +
                    describe(y.channel));
      }
      if (x.payload != y.payload) {
        return fail(here + "payloads differ");
      }
      if (x.recv_names.size() != y.recv_names.size()) {
        return fail(here + count_text("binder", x.recv_names.size(),
                                      y.recv_names.size()));
      }
      if (x.kind != BranchKind::Input && !close(x.weight, y.weight)) {
        return fail(here + (x.kind == BranchKind::Delay ? "rate " :
                                                          "weight ") +
                    format_double(x.weight) + " vs " +
                    format_double(y.weight));
      }
      if (x.target != y.target) {
        return fail(here + "continuation " + target_name(left_, x.target) +
                    " vs " + target_name(right_, y.target));
      }
      if (x.args != y.args) {
        return fail(here + "continuation arguments differ");
      }
    }
    return CompareResult{true, ""};
  }

  static std::string target_name(const Program& prog, int target) {
    if (target < 0) return "()";
    return prog.defs[static_cast<std::size_t>(target)].name;
  }

  const Program& left_;
  const Program& right_;
};

}  // namespace

CompareResult compare_programs(const Program& left, const Program& right) {
  return Comparator(left, right).run();
}

}  // namespace pim::pi
