#include "pim/pi/ast.hpp"

namespace pim::pi {

int Program::find_def(std::string_view name) const {
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (defs[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int Program::find_global(std::string_view name) const {
  for (std::size_t i = 0; i < globals.size(); ++i) {
    if (globals[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

class Linter {
 public:
  explicit Linter(const Program& program) : prog_(program) {}

  std::vector<std::string> run() {
    for (std::size_t d = 0; d < prog_.defs.size(); ++d) {
      check_def(static_cast<int>(d));
    }
    for (int def : prog_.plot) {
      if (def < 0 || def >= static_cast<int>(prog_.defs.size())) {
        report("plot directive", "references an unknown definition");
      }
    }
    for (const RunStatement& run : prog_.runs) {
      if (run.def < 0 || run.def >= static_cast<int>(prog_.defs.size())) {
        report("run statement", "references an unknown definition");
      } else if (!prog_.defs[static_cast<std::size_t>(run.def)]
                      .params.empty()) {
        report("run statement",
               "instantiates '" +
                   prog_.defs[static_cast<std::size_t>(run.def)].name +
                   "', which takes parameters");
      }
      if (run.count < 0) report("run statement", "negative count");
    }
    return std::move(errors_);
  }

 private:
  void report(const std::string& where, const std::string& what) {
    errors_.push_back(where + ": " + what);
  }

  bool value_in_scope(const ProcessDef& def, const Branch* branch,
                      const ValueRef& v, bool allow_recv) const {
    switch (v.kind) {
      case ValueKind::Param:
        return v.index >= 0 && v.index < static_cast<int>(def.params.size());
      case ValueKind::Local:
        return v.index >= 0 && v.index < static_cast<int>(def.locals.size());
      case ValueKind::Recv:
        return allow_recv && branch && v.index >= 0 &&
               v.index < static_cast<int>(branch->recv_names.size());
      case ValueKind::Global:
        return v.index >= 0 &&
               v.index < static_cast<int>(prog_.globals.size());
    }
    return false;
  }

  /// Arity of the channel a branch communicates on; private channels
  /// (params, locals, received bonds) never carry payload.
  int channel_arity(const ValueRef& v) const {
    if (v.kind == ValueKind::Global) {
      return prog_.globals[static_cast<std::size_t>(v.index)].arity;
    }
    return 0;
  }

  void check_def(int d) {
    const ProcessDef& def = prog_.defs[static_cast<std::size_t>(d)];
    const std::string where = "definition " + def.name;
    for (std::size_t b = 0; b < def.branches.size(); ++b) {
      const Branch& branch = def.branches[b];
      const std::string at = where + ", branch " + std::to_string(b + 1);
      if (branch.kind != BranchKind::Delay) {
        if (!value_in_scope(def, &branch, branch.channel, false)) {
          report(at, "communicates on an out-of-scope channel");
          continue;
        }
        if (branch.channel.kind == ValueKind::Recv) {
          report(at, "communicates on its own received channel");
          continue;
        }
      }
      if (branch.kind == BranchKind::Output) {
        for (const ValueRef& v : branch.payload) {
          if (!value_in_scope(def, &branch, v, false)) {
            report(at, "sends an out-of-scope value");
          }
        }
        if (static_cast<int>(branch.payload.size()) !=
            channel_arity(branch.channel)) {
          report(at, "payload arity does not match the channel declaration");
        }
      } else if (branch.kind == BranchKind::Input) {
        if (static_cast<int>(branch.recv_names.size()) !=
            channel_arity(branch.channel)) {
          report(at, "receive arity does not match the channel declaration");
        }
      } else if (!(branch.weight > 0.0)) {
        report(at, "delay rate must be positive");
      }
      if (branch.target >= static_cast<int>(prog_.defs.size())) {
        report(at, "continues into an unknown definition");
      } else if (branch.target >= 0) {
        const ProcessDef& target =
            prog_.defs[static_cast<std::size_t>(branch.target)];
        if (branch.args.size() != target.params.size()) {
          report(at, "instantiates " + target.name + " with " +
                         std::to_string(branch.args.size()) +
                         " argument(s), expected " +
                         std::to_string(target.params.size()));
        }
        for (const ValueRef& v : branch.args) {
          if (!value_in_scope(def, &branch, v, true)) {
            report(at, "passes an out-of-scope value");
          }
        }
      } else if (!branch.args.empty()) {
        report(at, "termination takes no arguments");
      }
    }
  }

  const Program& prog_;
  std::vector<std::string> errors_;
};

}  // namespace

std::vector<std::string> lint(const Program& program) {
  return Linter(program).run();
}

}  // namespace pim::pi
