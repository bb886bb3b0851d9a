#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pim/pi/ast.hpp"
#include "pim/random.hpp"
#include "pim/trace.hpp"

namespace pim::pi {

/// Executes a program by Gillespie's direct method. Reaction channels are
/// the program's communication channels (propensity: channel rate times the
/// number of output/input pairings across distinct processes, outputs
/// weighted) plus one delay slot per definition.
///
/// Throws std::invalid_argument when the program fails lint().
class Interpreter {
 public:
  Interpreter(const Program& program, std::uint64_t seed);

  double time() const { return time_; }

  /// Executes one reaction and returns its absolute time, or nothing when
  /// no reaction can fire anymore.
  std::optional<double> step();

  /// Live process count per definition.
  std::vector<long> counts() const;
  long count(int def) const;

  /// Runs until `until`, sampling points+1 rows at k*until/points
  /// (k = 0..points); row values are live counts per definition.
  TraceTable simulate(double until, int points);

 private:
  /// Complete binary tree over per-slot propensities; leaves hold the
  /// values, inner nodes their sums, so updates stay exact and sampling a
  /// slot proportionally to its value is a root-to-leaf descent.
  class SumTree {
   public:
    void ensure(std::size_t n);
    void set(std::size_t i, double value);
    double get(std::size_t i) const;
    double total() const { return nodes_.empty() ? 0.0 : nodes_[1]; }
    std::size_t sample(double x) const;

   private:
    std::size_t leaves_ = 0;
    std::vector<double> nodes_;
  };

  struct Entry {
    int instance;
    int branch;
    double weight;  // outputs only
    int handle;     // index into the owning instance's handle list
  };

  struct Channel {
    double rate = 0.0;
    bool permanent = false;
    int refs = 0;
    std::vector<Entry> outs;
    std::vector<Entry> ins;
    double out_weight = 0.0;  // sum of output weights
    double self_sum = 0.0;    // sum over instances of w_out * n_in
    double common_weight = 1.0;
    bool mixed = false;  // output weights differ; pick by linear scan
  };

  struct Handle {
    int channel;
    bool is_out;
    int pos;
  };

  /// One instance's aggregate footprint on one channel, for self_sum upkeep.
  struct Touch {
    int channel;
    double w_out = 0.0;
    int n_in = 0;
  };

  struct Instance {
    int def = -1;
    bool alive = false;
    std::vector<int> args;
    std::vector<int> locals;
    std::vector<Handle> handles;
    std::vector<Touch> touches;
    int pos_in_def = -1;
  };

  int new_channel(double rate);
  void ref_channel(int c) { ++channels_[static_cast<std::size_t>(c)].refs; }
  void unref_channel(int c);
  void refresh_channel(int c);

  int resolve(const Instance& inst, const ValueRef& v,
              const std::vector<int>& recv) const;

  int spawn(int def, std::vector<int> args);
  void destroy(int id);
  void remove_entry(std::vector<Entry>& list, int pos);

  void fire_channel(int c);
  void fire_delay(int def);

  Program prog_;
  Rng rng_;
  double time_ = 0.0;

  std::vector<Channel> channels_;
  std::vector<int> channel_free_;
  std::vector<Instance> instances_;
  std::vector<int> instance_free_;
  std::vector<std::vector<int>> def_instances_;
  std::vector<double> def_delay_weight_;  // sum of delay rates per def

  SumTree channel_prop_;
  SumTree delay_prop_;
};

}  // namespace pim::pi
