#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pim/model.hpp"

namespace pim::pi {

/// Declared before all process definitions; association channels carry the
/// private bond channels (arity >= 1), nil carries nothing.
struct GlobalChannel {
  std::string name;
  double rate = 0.0;
  int arity = 0;
};

/// `new name@rate:chan` at the head of a process body; fresh per instance.
struct LocalChannel {
  std::string name;
  double rate = 0.0;
};

enum class ValueKind { Param, Local, Recv, Global };

/// A channel-valued expression inside one process definition: a parameter,
/// a local channel, a variable bound by this branch's input, or a global.
struct ValueRef {
  ValueKind kind = ValueKind::Global;
  int index = -1;

  friend bool operator==(const ValueRef&, const ValueRef&) = default;
};

enum class BranchKind { Output, Input, Delay };

/// One summand: an action prefix plus its continuation instantiation
/// (target < 0 terminates the process).
struct Branch {
  BranchKind kind = BranchKind::Delay;
  ValueRef channel;                     // Output/Input only
  std::vector<ValueRef> payload;        // Output only
  std::vector<std::string> recv_names;  // Input only
  double weight = 1.0;                  // Output weight or Delay rate
  int target = -1;
  std::vector<ValueRef> args;
};

struct ProcessDef {
  std::string name;
  bool starts_group = false;  // rendered `let` instead of `and`
  std::vector<std::string> params;
  std::vector<LocalChannel> locals;
  std::vector<Branch> branches;  // empty renders as ()
};

struct RunStatement {
  long count = 0;
  int def = -1;
};

struct Program {
  double sample_time = kDefaultSampleTime;
  std::vector<int> plot;  // def indices in directive order
  std::vector<GlobalChannel> globals;
  std::vector<ProcessDef> defs;
  std::vector<RunStatement> runs;

  int find_def(std::string_view name) const;
  int find_global(std::string_view name) const;
};

/// Static checks: every reference in range, channel refs actually refer to
/// channels, payload/recv arities match the channel declaration (globals
/// only; private channels always carry nothing), instantiation arity
/// matches the target's parameter count. Empty result means well-formed.
std::vector<std::string> lint(const Program& program);

}  // namespace pim::pi
