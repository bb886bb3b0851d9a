#include "pim/rules.hpp"

#include <cassert>
#include <stdexcept>

#include "pim/validator.hpp"

namespace pim::rules {

namespace {

std::vector<char> flags_from(const std::vector<StateMask>& allowed,
                             std::size_t states) {
  std::vector<char> out(states, 0);
  for (StateMask m : allowed) out[m] = 1;
  return out;
}

}  // namespace

int Simulator::pair_of(const SiteRef& a, const SiteRef& b) const {
  const bool a_first = site_precedes(a.site, a.species, b.site, b.species);
  const SiteRef& lo = a_first ? a : b;
  const SiteRef& hi = a_first ? b : a;
  for (std::size_t i = 0; i < pair_keys_.size(); ++i) {
    if (pair_keys_[i].first == lo && pair_keys_[i].second == hi) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Simulator::Simulator(const Model& model, std::uint64_t seed,
                     std::size_t state_cap)
    : model_(model), rng_(seed) {
  if (!validate(model).empty()) {
    throw std::invalid_argument(
        "the model has unresolved violations; validate it first");
  }
  std::size_t total_states = 0;
  for (const std::string& sp : model.species()) {
    total_states += std::size_t{1} << model.sites(sp).size();
    if (total_states > state_cap) {
      throw std::length_error("state space exceeds the configured cap at '" +
                              sp + "'");
    }
  }

  const auto& species = model.species();
  by_state_.resize(species.size());
  state_order_.resize(species.size());
  for (std::size_t s = 0; s < species.size(); ++s) {
    by_state_[s].resize(std::size_t{1} << model.sites(species[s]).size());
    state_order_[s] = all_states(model, species[s]);
    for (std::size_t r = 0; r < state_order_[s].size(); ++r) {
      columns_.push_back(species[s] + std::to_string(r));
    }
  }

  auto make_side = [&](const Sentence& sentence, const SiteRef& ref) {
    Side side;
    side.species = model.species_index(ref.species);
    side.site = ref.has_site() ? model.site_index(ref.species, ref.site) : -1;
    side.allowed = states_for(model, sentence, ref);
    side.allowed_flag = flags_from(
        side.allowed,
        std::size_t{1} << model.sites(ref.species).size());
    return side;
  };

  for (const Sentence& sentence : model.sentences()) {
    Rule rule;
    rule.rate = sentence.rate;
    rule.left = make_side(sentence, sentence.left);
    switch (sentence.kind) {
      case SentenceKind::Association:
        rule.kind = RuleKind::Associate;
        rule.right = make_side(sentence, *sentence.right);
        break;
      case SentenceKind::Dissociation: {
        rule.kind = RuleKind::Dissociate;
        rule.right = make_side(sentence, *sentence.right);
        int pair = pair_of(sentence.left, *sentence.right);
        if (pair < 0) {
          pair = static_cast<int>(pair_keys_.size());
          const bool left_first =
              site_precedes(sentence.left.site, sentence.left.species,
                            sentence.right->site, sentence.right->species);
          pair_keys_.push_back(left_first
                                   ? std::pair{sentence.left, *sentence.right}
                                   : std::pair{*sentence.right,
                                               sentence.left});
          pair_rules_.emplace_back();
        }
        rule.left_is_x =
            pair_keys_[static_cast<std::size_t>(pair)].first ==
            sentence.left;
        pair_rules_[static_cast<std::size_t>(pair)].push_back(
            static_cast<int>(rules_.size()));
        break;
      }
      case SentenceKind::Transformation:
        rule.kind = RuleKind::Transform;
        rule.target = sentence.right
                          ? model.species_index(sentence.right->species)
                          : -1;
        break;
    }
    rules_.push_back(std::move(rule));
  }

  for (std::size_t s = 0; s < species.size(); ++s) {
    long population = model.initial_count(species[s]);
    for (long i = 0; i < population; ++i) new_agent(static_cast<int>(s));
  }
}

int Simulator::new_agent(int species) {
  int id;
  if (!agent_free_.empty()) {
    id = agent_free_.back();
    agent_free_.pop_back();
  } else {
    id = static_cast<int>(agents_.size());
    agents_.emplace_back();
  }
  Agent& agent = agents_[static_cast<std::size_t>(id)];
  agent.species = species;
  agent.mask = 0;
  agent.alive = true;
  agent.bonds.assign(
      model_.sites(model_.species()[static_cast<std::size_t>(species)])
          .size(),
      -1);
  auto& cell = by_state_[static_cast<std::size_t>(species)][0];
  agent.pos_in_state = static_cast<int>(cell.size());
  cell.push_back(id);
  return id;
}

void Simulator::destroy_agent(int id) {
  Agent& agent = agents_[static_cast<std::size_t>(id)];
  assert(agent.alive && agent.mask == 0);
  auto& cell = by_state_[static_cast<std::size_t>(agent.species)]
                        [agent.mask];
  int pos = agent.pos_in_state;
  cell[static_cast<std::size_t>(pos)] = cell.back();
  cell.pop_back();
  if (pos < static_cast<int>(cell.size())) {
    agents_[static_cast<std::size_t>(cell[static_cast<std::size_t>(pos)])]
        .pos_in_state = pos;
  }
  agent = Agent{};
  agent_free_.push_back(id);
}

void Simulator::move_agent(int id, StateMask new_mask) {
  Agent& agent = agents_[static_cast<std::size_t>(id)];
  auto& old_cell =
      by_state_[static_cast<std::size_t>(agent.species)][agent.mask];
  int pos = agent.pos_in_state;
  old_cell[static_cast<std::size_t>(pos)] = old_cell.back();
  old_cell.pop_back();
  if (pos < static_cast<int>(old_cell.size())) {
    agents_[static_cast<std::size_t>(
                old_cell[static_cast<std::size_t>(pos)])]
        .pos_in_state = pos;
  }
  agent.mask = new_mask;
  auto& new_cell =
      by_state_[static_cast<std::size_t>(agent.species)][new_mask];
  agent.pos_in_state = static_cast<int>(new_cell.size());
  new_cell.push_back(id);
}

void Simulator::drop_from_rule(Bond& bond, int rule) {
  for (std::size_t w = 0; w < bond.where.size(); ++w) {
    if (bond.where[w].first != rule) continue;
    int pos = bond.where[w].second;
    auto& matching = rules_[static_cast<std::size_t>(rule)].matching;
    matching[static_cast<std::size_t>(pos)] = matching.back();
    matching.pop_back();
    if (pos < static_cast<int>(matching.size())) {
      Bond& moved = bonds_[static_cast<std::size_t>(
          matching[static_cast<std::size_t>(pos)])];
      for (auto& entry : moved.where) {
        if (entry.first == rule) entry.second = pos;
      }
    }
    bond.where[w] = bond.where.back();
    bond.where.pop_back();
    return;
  }
}

void Simulator::recheck_bond(int bond_id) {
  Bond& bond = bonds_[static_cast<std::size_t>(bond_id)];
  const Agent& ax = agents_[static_cast<std::size_t>(bond.x.agent)];
  const Agent& ay = agents_[static_cast<std::size_t>(bond.y.agent)];
  for (int r : pair_rules_[static_cast<std::size_t>(bond.pair)]) {
    Rule& rule = rules_[static_cast<std::size_t>(r)];
    const Agent& left_end = rule.left_is_x ? ax : ay;
    const Agent& right_end = rule.left_is_x ? ay : ax;
    bool should = rule.left.allowed_flag[left_end.mask] &&
                  rule.right.allowed_flag[right_end.mask];
    bool is = false;
    for (const auto& entry : bond.where) {
      if (entry.first == r) is = true;
    }
    if (should && !is) {
      bond.where.push_back({r, static_cast<int>(rule.matching.size())});
      rule.matching.push_back(bond_id);
    } else if (!should && is) {
      drop_from_rule(bond, r);
    }
  }
}

long Simulator::eligible(const Side& side) const {
  long total = 0;
  for (StateMask m : side.allowed) {
    total += static_cast<long>(
        by_state_[static_cast<std::size_t>(side.species)][m].size());
  }
  return total;
}

int Simulator::pick_agent(const Side& side) {
  long total = eligible(side);
  assert(total > 0);
  std::uint64_t x = rng_.below(static_cast<std::uint64_t>(total));
  for (StateMask m : side.allowed) {
    const auto& cell = by_state_[static_cast<std::size_t>(side.species)][m];
    if (x < cell.size()) return cell[static_cast<std::size_t>(x)];
    x -= cell.size();
  }
  assert(false);
  return -1;
}

void Simulator::fire(Rule& rule) {
  switch (rule.kind) {
    case RuleKind::Associate: {
      int a = pick_agent(rule.left);
      int b = pick_agent(rule.right);
      int bond_id;
      if (!bond_free_.empty()) {
        bond_id = bond_free_.back();
        bond_free_.pop_back();
      } else {
        bond_id = static_cast<int>(bonds_.size());
        bonds_.emplace_back();
      }
      Bond& bond = bonds_[static_cast<std::size_t>(bond_id)];
      bond.where.clear();
      const SiteRef left_ref{
          model_.species()[static_cast<std::size_t>(rule.left.species)],
          model_.sites(model_.species()[static_cast<std::size_t>(
              rule.left.species)])[static_cast<std::size_t>(rule.left.site)]};
      const SiteRef right_ref{
          model_.species()[static_cast<std::size_t>(rule.right.species)],
          model_.sites(model_.species()[static_cast<std::size_t>(
              rule.right.species)])[static_cast<std::size_t>(
              rule.right.site)]};
      int pair = pair_of(left_ref, right_ref);
      if (pair < 0) {
        pair = static_cast<int>(pair_keys_.size());
        const bool left_first =
            site_precedes(left_ref.site, left_ref.species, right_ref.site,
                          right_ref.species);
        pair_keys_.push_back(left_first ? std::pair{left_ref, right_ref}
                                        : std::pair{right_ref, left_ref});
        pair_rules_.emplace_back();
      }
      bond.pair = pair;
      const bool left_is_x =
          pair_keys_[static_cast<std::size_t>(pair)].first == left_ref;
      bond.x = left_is_x ? BondEnd{a, rule.left.site}
                         : BondEnd{b, rule.right.site};
      bond.y = left_is_x ? BondEnd{b, rule.right.site}
                         : BondEnd{a, rule.left.site};
      Agent& aa = agents_[static_cast<std::size_t>(a)];
      Agent& ab = agents_[static_cast<std::size_t>(b)];
      aa.bonds[static_cast<std::size_t>(rule.left.site)] = bond_id;
      ab.bonds[static_cast<std::size_t>(rule.right.site)] = bond_id;
      move_agent(a, aa.mask | (StateMask{1} << rule.left.site));
      move_agent(b, ab.mask | (StateMask{1} << rule.right.site));
      for (int bd : aa.bonds) {
        if (bd >= 0) recheck_bond(bd);
      }
      for (int bd : ab.bonds) {
        if (bd >= 0 && bd != bond_id) recheck_bond(bd);
      }
      break;
    }
    case RuleKind::Dissociate: {
      int bond_id =
          rule.matching[rng_.below(rule.matching.size())];
      Bond& bond = bonds_[static_cast<std::size_t>(bond_id)];
      Agent& ax = agents_[static_cast<std::size_t>(bond.x.agent)];
      Agent& ay = agents_[static_cast<std::size_t>(bond.y.agent)];
      ax.bonds[static_cast<std::size_t>(bond.x.site)] = -1;
      ay.bonds[static_cast<std::size_t>(bond.y.site)] = -1;
      while (!bond.where.empty()) {
        drop_from_rule(bond, bond.where.back().first);
      }
      move_agent(bond.x.agent,
                 ax.mask & ~(StateMask{1} << bond.x.site));
      move_agent(bond.y.agent,
                 ay.mask & ~(StateMask{1} << bond.y.site));
      for (int bd : ax.bonds) {
        if (bd >= 0) recheck_bond(bd);
      }
      for (int bd : ay.bonds) {
        if (bd >= 0) recheck_bond(bd);
      }
      bond_free_.push_back(bond_id);
      break;
    }
    case RuleKind::Transform: {
      int a = pick_agent(rule.left);
      destroy_agent(a);
      if (rule.target >= 0) new_agent(rule.target);
      break;
    }
  }
}

double Simulator::rule_propensity(const Rule& rule) const {
  switch (rule.kind) {
    case RuleKind::Associate:
      return rule.rate * static_cast<double>(eligible(rule.left)) *
             static_cast<double>(eligible(rule.right));
    case RuleKind::Dissociate:
      return rule.rate * static_cast<double>(rule.matching.size());
    case RuleKind::Transform:
      return rule.rate * static_cast<double>(eligible(rule.left));
  }
  return 0.0;
}

double Simulator::total_propensity() const {
  double total = 0.0;
  for (const Rule& rule : rules_) total += rule_propensity(rule);
  return total;
}

void Simulator::fire_random(double x) {
  std::size_t chosen = rules_.size() - 1;
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    x -= rule_propensity(rules_[r]);
    if (x < 0.0) {
      chosen = r;
      break;
    }
  }
  fire(rules_[chosen]);
}

std::optional<double> Simulator::step() {
  double total = total_propensity();
  if (!(total > 0.0)) return std::nullopt;
  time_ += rng_.exponential(total);
  fire_random(rng_.uniform() * total);
  return time_;
}

std::vector<long> Simulator::counts() const {
  std::vector<long> out;
  for (std::size_t s = 0; s < by_state_.size(); ++s) {
    for (StateMask m : state_order_[s]) {
      out.push_back(static_cast<long>(by_state_[s][m].size()));
    }
  }
  return out;
}

TraceTable Simulator::run(double until, int points) {
  if (points < 1) points = 1;
  TraceTable table;
  table.columns = columns_;
  int next = 0;
  auto record = [&] {
    table.times.push_back(until * next / points);
    std::vector<double> row;
    for (long c : counts()) row.push_back(static_cast<double>(c));
    table.rows.push_back(std::move(row));
    ++next;
  };
  while (next <= points) {
    double total = total_propensity();
    if (!(total > 0.0)) {
      while (next <= points) record();
      break;
    }
    double te = time_ + rng_.exponential(total);
    while (next <= points && until * next / points <= te) record();
    if (next > points) break;
    time_ = te;
    fire_random(rng_.uniform() * total);
  }
  return table;
}

}  // namespace pim::rules
