#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pim/model.hpp"
#include "pim/random.hpp"
#include "pim/trace.hpp"

namespace pim::rules {

/// Executes a model directly as a rule system over explicit agents and
/// bonds, with no intermediate program: association fires at rate times
/// the product of eligible-agent counts, dissociation at rate times the
/// number of eligible bonds, transformation at rate times the eligible
/// source count. Written independently of the process-calculus pipeline so
/// the two can check each other.
///
/// The model must be valid (no reported violations); the constructor
/// throws std::invalid_argument otherwise, or std::length_error when the
/// state space exceeds `state_cap` total states.
class Simulator {
 public:
  Simulator(const Model& model, std::uint64_t seed,
            std::size_t state_cap = std::size_t{1} << 16);

  double time() const { return time_; }

  /// Fires one rule and returns its absolute time, or nothing when no rule
  /// can fire anymore.
  std::optional<double> step();

  /// One column per (species, state): species in model order, states in
  /// graded-lexicographic order, named like the generated program's
  /// process definitions.
  const std::vector<std::string>& columns() const { return columns_; }
  std::vector<long> counts() const;

  /// Runs until `until`, sampling points+1 rows at k*until/points.
  TraceTable run(double until, int points);

 private:
  enum class RuleKind { Associate, Dissociate, Transform };

  struct Side {
    int species = -1;
    int site = -1;
    std::vector<StateMask> allowed;  // states satisfying the conditions
    std::vector<char> allowed_flag;  // indexed by mask
  };

  struct Rule {
    RuleKind kind;
    Side left;
    Side right;             // binary rules only
    bool left_is_x = true;  // Dissociate: left side is the pair key's first
    int target = -1;        // transform target species; -1 decays
    double rate = 0.0;
    std::vector<int> matching;  // Dissociate: eligible bond ids
  };

  struct BondEnd {
    int agent = -1;
    int site = -1;
  };

  struct Bond {
    BondEnd x;  // the end named on the left of the dissociation pair key
    BondEnd y;
    int pair = -1;                            // index into pair_rules_
    std::vector<std::pair<int, int>> where;   // (rule, pos in matching)
  };

  struct Agent {
    int species = -1;
    StateMask mask = 0;
    bool alive = false;
    std::vector<int> bonds;  // per site: bond id or -1
    int pos_in_state = -1;
  };

  long eligible(const Side& side) const;
  int pick_agent(const Side& side);
  void move_agent(int id, StateMask new_mask);
  void recheck_bond(int bond_id);
  void drop_from_rule(Bond& bond, int rule);
  int new_agent(int species);
  void destroy_agent(int id);

  double rule_propensity(const Rule& rule) const;
  double total_propensity() const;
  void fire_random(double x);
  void fire(Rule& rule);

  const Model& model_;
  Rng rng_;
  double time_ = 0.0;

  std::vector<Rule> rules_;
  // Dissociation rules grouped by unordered site-pair key; bonds point at
  // their group so a state change rechecks only the relevant rules.
  std::vector<std::vector<int>> pair_rules_;

  std::vector<Agent> agents_;
  std::vector<int> agent_free_;
  std::vector<Bond> bonds_;
  std::vector<int> bond_free_;

  std::vector<std::vector<std::vector<int>>> by_state_;  // [species][mask]
  std::vector<std::vector<StateMask>> state_order_;      // graded-lex
  std::vector<std::string> columns_;

  int pair_of(const SiteRef& a, const SiteRef& b) const;
  std::vector<std::pair<SiteRef, SiteRef>> pair_keys_;
};

}  // namespace pim::rules
