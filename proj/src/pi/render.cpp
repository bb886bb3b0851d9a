#include "pim/pi/render.hpp"

#include <sstream>

#include "pim/format.hpp"

namespace pim::pi {

namespace {

std::string chan_type(int arity) {
  std::string out = "chan";
  if (arity > 0) {
    out += "(";
    for (int i = 0; i < arity; ++i) {
      if (i) out += ",";
      out += "chan";
    }
    out += ")";
  }
  return out;
}

class Renderer {
 public:
  explicit Renderer(const Program& program) : prog_(program) {}

  std::string run() {
    out_ << "directive sample " << format_double(prog_.sample_time) << "\n";
    if (!prog_.plot.empty()) {
      out_ << "directive plot ";
      for (std::size_t i = 0; i < prog_.plot.size(); ++i) {
        if (i) out_ << "; ";
        out_ << def_name(prog_.plot[i]) << "()";
      }
      out_ << "\n";
    }
    out_ << "\n";
    for (const GlobalChannel& g : prog_.globals) {
      out_ << "new " << g.name << "@" << format_double(g.rate) << ":"
           << chan_type(g.arity) << "\n";
    }
    for (const ProcessDef& def : prog_.defs) {
      out_ << "\n";
      render_def(def);
    }
    if (!prog_.runs.empty()) out_ << "\n";
    for (const RunStatement& run : prog_.runs) {
      out_ << "run " << run.count << " of " << def_name(run.def) << "()\n";
    }
    return std::move(out_).str();
  }

 private:
  std::string def_name(int d) const {
    return prog_.defs[static_cast<std::size_t>(d)].name;
  }

  std::string value_name(const ProcessDef& def, const Branch* branch,
                         const ValueRef& v) const {
    std::size_t i = static_cast<std::size_t>(v.index);
    switch (v.kind) {
      case ValueKind::Param:
        return def.params[i];
      case ValueKind::Local:
        return def.locals[i].name;
      case ValueKind::Recv:
        return branch->recv_names[i];
      case ValueKind::Global:
        return prog_.globals[i].name;
    }
    return "?";
  }

  std::string render_branch(const ProcessDef& def,
                            const Branch& branch) const {
    std::ostringstream line;
    switch (branch.kind) {
      case BranchKind::Output: {
        line << "!" << value_name(def, &branch, branch.channel);
        if (!branch.payload.empty()) {
          line << "(";
          for (std::size_t i = 0; i < branch.payload.size(); ++i) {
            if (i) line << ",";
            line << value_name(def, &branch, branch.payload[i]);
          }
          line << ")";
        }
        if (!branch.payload.empty() || branch.weight != 1.0) {
          line << "*" << format_double(branch.weight);
        }
        break;
      }
      case BranchKind::Input: {
        line << "?" << value_name(def, &branch, branch.channel);
        if (!branch.recv_names.empty()) {
          line << "(";
          for (std::size_t i = 0; i < branch.recv_names.size(); ++i) {
            if (i) line << ",";
            line << branch.recv_names[i];
          }
          line << ")";
        }
        break;
      }
      case BranchKind::Delay:
        line << "delay@" << format_double(branch.weight);
        break;
    }
    line << "; ";
    if (branch.target < 0) {
      line << "()";
    } else {
      line << def_name(branch.target) << "(";
      for (std::size_t i = 0; i < branch.args.size(); ++i) {
        if (i) line << ",";
        line << value_name(def, &branch, branch.args[i]);
      }
      line << ")";
    }
    return std::move(line).str();
  }

  void render_def(const ProcessDef& def) {
    out_ << (def.starts_group ? "let " : "and ") << def.name << "(";
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      if (i) out_ << ",";
      out_ << def.params[i] << ":chan";
    }
    out_ << ") =\n";
    if (def.locals.empty() && def.branches.empty()) {
      out_ << "  ()\n";
      return;
    }
    std::vector<std::string> lines;
    for (const LocalChannel& local : def.locals) {
      lines.push_back("new " + local.name + "@" + format_double(local.rate) +
                      ":chan");
    }
    if (def.branches.size() == 1) {
      lines.push_back(render_branch(def, def.branches.front()));
    } else {
      for (std::size_t i = 0; i < def.branches.size(); ++i) {
        lines.push_back((i == 0 ? "do " : "or ") +
                        render_branch(def, def.branches[i]));
      }
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out_ << (i == 0 ? "  ( " : "    ") << lines[i];
      out_ << (i + 1 == lines.size() ? " )\n" : "\n");
    }
  }

  const Program& prog_;
  std::ostringstream out_;
};

}  // namespace

std::string render(const Program& program) {
  return Renderer(program).run();
}

}  // namespace pim::pi
