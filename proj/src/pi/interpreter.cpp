#include "pim/pi/interpreter.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pim::pi {

void Interpreter::SumTree::ensure(std::size_t n) {
  if (n <= leaves_) return;
  std::size_t leaves = leaves_ ? leaves_ : 1;
  while (leaves < n) leaves *= 2;
  std::vector<double> nodes(2 * leaves, 0.0);
  for (std::size_t i = 0; i < leaves_; ++i) {
    nodes[leaves + i] = nodes_[leaves_ + i];
  }
  for (std::size_t k = leaves - 1; k >= 1; --k) {
    nodes[k] = nodes[2 * k] + nodes[2 * k + 1];
  }
  leaves_ = leaves;
  nodes_ = std::move(nodes);
}

void Interpreter::SumTree::set(std::size_t i, double value) {
  ensure(i + 1);
  std::size_t k = leaves_ + i;
  nodes_[k] = value;
  for (k /= 2; k >= 1; k /= 2) {
    nodes_[k] = nodes_[2 * k] + nodes_[2 * k + 1];
  }
}

double Interpreter::SumTree::get(std::size_t i) const {
  return i < leaves_ ? nodes_[leaves_ + i] : 0.0;
}

std::size_t Interpreter::SumTree::sample(double x) const {
  std::size_t k = 1;
  while (k < leaves_) {
    k *= 2;
    if (x >= nodes_[k] && nodes_[k + 1] > 0.0) {
      x -= nodes_[k];
      ++k;
    }
  }
  std::size_t i = k - leaves_;
  // Rounding can strand x on an empty leaf; fall back to the first live one.
  if (nodes_[k] <= 0.0) {
    for (i = 0; i < leaves_; ++i) {
      if (nodes_[leaves_ + i] > 0.0) break;
    }
  }
  return i;
}

Interpreter::Interpreter(const Program& program, std::uint64_t seed)
    : prog_(program), rng_(seed) {
  std::vector<std::string> errors = lint(prog_);
  if (!errors.empty()) {
    throw std::invalid_argument("ill-formed program: " + errors.front());
  }
  for (const GlobalChannel& g : prog_.globals) {
    Channel ch;
    ch.rate = g.rate;
    ch.permanent = true;
    ch.refs = 1;
    channels_.push_back(std::move(ch));
  }
  channel_prop_.ensure(channels_.size() + 1);
  def_instances_.resize(prog_.defs.size());
  def_delay_weight_.assign(prog_.defs.size(), 0.0);
  for (std::size_t d = 0; d < prog_.defs.size(); ++d) {
    for (const Branch& b : prog_.defs[d].branches) {
      if (b.kind == BranchKind::Delay) def_delay_weight_[d] += b.weight;
    }
  }
  delay_prop_.ensure(prog_.defs.size() + 1);
  for (const RunStatement& run : prog_.runs) {
    for (long i = 0; i < run.count; ++i) spawn(run.def, {});
  }
}

int Interpreter::new_channel(double rate) {
  int id;
  if (!channel_free_.empty()) {
    id = channel_free_.back();
    channel_free_.pop_back();
    channels_[static_cast<std::size_t>(id)] = Channel{};
  } else {
    id = static_cast<int>(channels_.size());
    channels_.emplace_back();
  }
  channels_[static_cast<std::size_t>(id)].rate = rate;
  return id;
}

void Interpreter::unref_channel(int c) {
  Channel& ch = channels_[static_cast<std::size_t>(c)];
  if (--ch.refs > 0 || ch.permanent) return;
  assert(ch.outs.empty() && ch.ins.empty());
  channel_prop_.set(static_cast<std::size_t>(c), 0.0);
  channel_free_.push_back(c);
}

void Interpreter::refresh_channel(int c) {
  Channel& ch = channels_[static_cast<std::size_t>(c)];
  double pairs = ch.out_weight * static_cast<double>(ch.ins.size()) -
                 ch.self_sum;
  double prop = ch.rate > 0.0 && pairs > 0.0 ? ch.rate * pairs : 0.0;
  channel_prop_.set(static_cast<std::size_t>(c), prop);
}

int Interpreter::resolve(const Instance& inst, const ValueRef& v,
                         const std::vector<int>& recv) const {
  switch (v.kind) {
    case ValueKind::Param:
      return inst.args[static_cast<std::size_t>(v.index)];
    case ValueKind::Local:
      return inst.locals[static_cast<std::size_t>(v.index)];
    case ValueKind::Recv:
      return recv[static_cast<std::size_t>(v.index)];
    case ValueKind::Global:
      return v.index;
  }
  return -1;
}

int Interpreter::spawn(int def, std::vector<int> args) {
  int id;
  if (!instance_free_.empty()) {
    id = instance_free_.back();
    instance_free_.pop_back();
  } else {
    id = static_cast<int>(instances_.size());
    instances_.emplace_back();
  }
  const ProcessDef& proto = prog_.defs[static_cast<std::size_t>(def)];
  Instance inst;
  inst.def = def;
  inst.alive = true;
  inst.args = std::move(args);
  for (int c : inst.args) ref_channel(c);
  for (const LocalChannel& local : proto.locals) {
    int c = new_channel(local.rate);
    ref_channel(c);
    inst.locals.push_back(c);
  }

  for (std::size_t b = 0; b < proto.branches.size(); ++b) {
    const Branch& branch = proto.branches[b];
    if (branch.kind == BranchKind::Delay) continue;
    int c = resolve(inst, branch.channel, {});
    Touch* touch = nullptr;
    for (Touch& t : inst.touches) {
      if (t.channel == c) touch = &t;
    }
    if (!touch) {
      inst.touches.push_back(Touch{c, 0.0, 0});
      touch = &inst.touches.back();
    }
    Channel& ch = channels_[static_cast<std::size_t>(c)];
    Entry entry{id, static_cast<int>(b), branch.weight,
                static_cast<int>(inst.handles.size())};
    if (branch.kind == BranchKind::Output) {
      if (ch.outs.empty()) {
        ch.common_weight = branch.weight;
        ch.mixed = false;
      } else if (branch.weight != ch.common_weight) {
        ch.mixed = true;
      }
      inst.handles.push_back(
          Handle{c, true, static_cast<int>(ch.outs.size())});
      ch.outs.push_back(entry);
      ch.out_weight += branch.weight;
      touch->w_out += branch.weight;
    } else {
      inst.handles.push_back(
          Handle{c, false, static_cast<int>(ch.ins.size())});
      ch.ins.push_back(entry);
      touch->n_in += 1;
    }
  }
  for (const Touch& t : inst.touches) {
    Channel& ch = channels_[static_cast<std::size_t>(t.channel)];
    ch.self_sum += t.w_out * static_cast<double>(t.n_in);
    refresh_channel(t.channel);
  }

  inst.pos_in_def = static_cast<int>(
      def_instances_[static_cast<std::size_t>(def)].size());
  def_instances_[static_cast<std::size_t>(def)].push_back(id);
  if (def_delay_weight_[static_cast<std::size_t>(def)] > 0.0) {
    delay_prop_.set(
        static_cast<std::size_t>(def),
        def_delay_weight_[static_cast<std::size_t>(def)] *
            static_cast<double>(
                def_instances_[static_cast<std::size_t>(def)].size()));
  }
  instances_[static_cast<std::size_t>(id)] = std::move(inst);
  return id;
}

void Interpreter::remove_entry(std::vector<Entry>& list, int pos) {
  list[static_cast<std::size_t>(pos)] = list.back();
  list.pop_back();
  if (pos < static_cast<int>(list.size())) {
    const Entry& moved = list[static_cast<std::size_t>(pos)];
    instances_[static_cast<std::size_t>(moved.instance)]
        .handles[static_cast<std::size_t>(moved.handle)]
        .pos = pos;
  }
}

void Interpreter::destroy(int id) {
  Instance& inst = instances_[static_cast<std::size_t>(id)];
  assert(inst.alive);
  for (std::size_t h = 0; h < inst.handles.size(); ++h) {
    const Handle& handle = inst.handles[h];
    Channel& ch = channels_[static_cast<std::size_t>(handle.channel)];
    if (handle.is_out) {
      ch.out_weight -=
          ch.outs[static_cast<std::size_t>(handle.pos)].weight;
      remove_entry(ch.outs, handle.pos);
      if (ch.outs.empty()) ch.mixed = false;
    } else {
      remove_entry(ch.ins, handle.pos);
    }
  }
  for (const Touch& t : inst.touches) {
    Channel& ch = channels_[static_cast<std::size_t>(t.channel)];
    ch.self_sum -= t.w_out * static_cast<double>(t.n_in);
    if (ch.outs.empty() && ch.ins.empty()) {
      ch.out_weight = 0.0;
      ch.self_sum = 0.0;
    }
    refresh_channel(t.channel);
  }

  auto& peers = def_instances_[static_cast<std::size_t>(inst.def)];
  int pos = inst.pos_in_def;
  peers[static_cast<std::size_t>(pos)] = peers.back();
  peers.pop_back();
  if (pos < static_cast<int>(peers.size())) {
    instances_[static_cast<std::size_t>(
                   peers[static_cast<std::size_t>(pos)])]
        .pos_in_def = pos;
  }
  if (def_delay_weight_[static_cast<std::size_t>(inst.def)] > 0.0) {
    delay_prop_.set(static_cast<std::size_t>(inst.def),
                    def_delay_weight_[static_cast<std::size_t>(inst.def)] *
                        static_cast<double>(peers.size()));
  }

  std::vector<int> args = std::move(inst.args);
  std::vector<int> locals = std::move(inst.locals);
  inst = Instance{};
  instance_free_.push_back(id);
  for (int c : args) unref_channel(c);
  for (int c : locals) unref_channel(c);
}

void Interpreter::fire_channel(int c) {
  Channel& ch = channels_[static_cast<std::size_t>(c)];
  assert(!ch.outs.empty() && !ch.ins.empty());
  std::size_t oi = 0;
  std::size_t ii = 0;
  bool found = false;
  // Self-pairings are excluded from the propensity, so rejection sampling
  // conditions the pair on distinct processes without distorting it.
  for (int tries = 0; tries < 256; ++tries) {
    if (!ch.mixed) {
      oi = rng_.below(ch.outs.size());
    } else {
      double x = rng_.uniform() * ch.out_weight;
      for (oi = 0; oi + 1 < ch.outs.size(); ++oi) {
        x -= ch.outs[oi].weight;
        if (x < 0.0) break;
      }
    }
    ii = rng_.below(ch.ins.size());
    if (ch.outs[oi].instance != ch.ins[ii].instance) {
      found = true;
      break;
    }
  }
  if (!found) {
    // Every draw was a self-pairing; the channel's net propensity is zero
    // (or a rounding sliver). Pick the first real pairing if one exists,
    // otherwise drop the sliver and skip the event.
    for (std::size_t o = 0; o < ch.outs.size() && !found; ++o) {
      for (std::size_t i = 0; i < ch.ins.size() && !found; ++i) {
        if (ch.outs[o].instance != ch.ins[i].instance) {
          oi = o;
          ii = i;
          found = true;
        }
      }
    }
    if (!found) {
      ch.self_sum = ch.out_weight * static_cast<double>(ch.ins.size());
      refresh_channel(c);
      return;
    }
  }
  const Entry out = ch.outs[oi];
  const Entry in = ch.ins[ii];

  // Resolve everything before spawning: spawn() may grow instances_ and
  // channels_, invalidating references into them.
  const Instance& sender = instances_[static_cast<std::size_t>(out.instance)];
  const Instance& receiver =
      instances_[static_cast<std::size_t>(in.instance)];
  const Branch& ob = prog_.defs[static_cast<std::size_t>(sender.def)]
                         .branches[static_cast<std::size_t>(out.branch)];
  const Branch& ib = prog_.defs[static_cast<std::size_t>(receiver.def)]
                         .branches[static_cast<std::size_t>(in.branch)];

  std::vector<int> payload;
  payload.reserve(ob.payload.size());
  for (const ValueRef& v : ob.payload) {
    payload.push_back(resolve(sender, v, {}));
  }
  std::vector<int> out_args;
  out_args.reserve(ob.args.size());
  for (const ValueRef& v : ob.args) {
    out_args.push_back(resolve(sender, v, {}));
  }
  std::vector<int> in_args;
  in_args.reserve(ib.args.size());
  for (const ValueRef& v : ib.args) {
    in_args.push_back(resolve(receiver, v, payload));
  }
  int out_target = ob.target;
  int in_target = ib.target;
  if (out_target >= 0) spawn(out_target, std::move(out_args));
  if (in_target >= 0) spawn(in_target, std::move(in_args));
  destroy(out.instance);
  destroy(in.instance);
}

void Interpreter::fire_delay(int def) {
  const ProcessDef& proto = prog_.defs[static_cast<std::size_t>(def)];
  double x = rng_.uniform() * def_delay_weight_[static_cast<std::size_t>(def)];
  const Branch* chosen = nullptr;
  for (const Branch& b : proto.branches) {
    if (b.kind != BranchKind::Delay) continue;
    chosen = &b;
    x -= b.weight;
    if (x < 0.0) break;
  }
  assert(chosen);
  const auto& peers = def_instances_[static_cast<std::size_t>(def)];
  int id = peers[rng_.below(peers.size())];
  Instance& inst = instances_[static_cast<std::size_t>(id)];
  if (chosen->target >= 0) {
    std::vector<int> args;
    args.reserve(chosen->args.size());
    for (const ValueRef& v : chosen->args) {
      args.push_back(resolve(inst, v, {}));
    }
    spawn(chosen->target, std::move(args));
  }
  destroy(id);
}

std::optional<double> Interpreter::step() {
  double channel_total = channel_prop_.total();
  double total = channel_total + delay_prop_.total();
  if (!(total > 0.0)) return std::nullopt;
  time_ += rng_.exponential(total);
  double x = rng_.uniform() * total;
  if (x < channel_total) {
    fire_channel(static_cast<int>(channel_prop_.sample(x)));
  } else {
    fire_delay(static_cast<int>(delay_prop_.sample(x - channel_total)));
  }
  return time_;
}

std::vector<long> Interpreter::counts() const {
  std::vector<long> out;
  out.reserve(def_instances_.size());
  for (const auto& list : def_instances_) {
    out.push_back(static_cast<long>(list.size()));
  }
  return out;
}

long Interpreter::count(int def) const {
  return static_cast<long>(def_instances_[static_cast<std::size_t>(def)]
                               .size());
}

TraceTable Interpreter::simulate(double until, int points) {
  if (points < 1) points = 1;
  TraceTable table;
  for (const ProcessDef& def : prog_.defs) table.columns.push_back(def.name);
  int next = 0;
  auto record = [&] {
    table.times.push_back(until * next / points);
    std::vector<double> row;
    row.reserve(def_instances_.size());
    for (const auto& list : def_instances_) {
      row.push_back(static_cast<double>(list.size()));
    }
    table.rows.push_back(std::move(row));
    ++next;
  };
  while (next <= points) {
    double channel_total = channel_prop_.total();
    double total = channel_total + delay_prop_.total();
    if (!(total > 0.0)) {
      while (next <= points) record();
      break;
    }
    double te = time_ + rng_.exponential(total);
    while (next <= points && until * next / points <= te) record();
    if (next > points) break;
    time_ = te;
    double x = rng_.uniform() * total;
    if (x < channel_total) {
      fire_channel(static_cast<int>(channel_prop_.sample(x)));
    } else {
      fire_delay(static_cast<int>(delay_prop_.sample(x - channel_total)));
    }
  }
  return table;
}

}  // namespace pim::pi
