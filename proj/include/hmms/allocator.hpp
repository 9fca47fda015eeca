// Copyright 2026 The hereditary-mms Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmms/errors.hpp"
#include "hmms/instance.hpp"
#include "hmms/item_set.hpp"
#include "hmms/rational.hpp"
#include "hmms/set_system.hpp"
#include "hmms/valuation.hpp"

namespace hmms {

/// Resolves every choice point of the allocation procedures. Each field has a
/// single supported policy today; they are spelled out so traces can state
/// which rule produced them.
struct TieBreakConfig {
  /// Candidate bundles of one size are tried in lexicographic order of their
  /// sorted item ids.
  enum class SubsetOrder { Lexicographic } subset_order = SubsetOrder::Lexicographic;
  /// Among agents that accept a bundle, the lowest index wins.
  enum class AgentOrder { Ascending } agent_order = AgentOrder::Ascending;
  /// MinimalSet tries removals by ascending (value to the chosen agent, item id).
  enum class RemovalOrder { AscendingValueThenIndex } removal_order = RemovalOrder::AscendingValueThenIndex;
};

struct AllocatorOptions {
  TieBreakConfig ties;
  /// Search symmetric items once per block of interchangeable items.
  bool use_equivalence_classes = true;
  /// The exhaustive reference procedure refuses instances with more items
  /// than this, unless the item blocks number at most this many.
  std::size_t naive_desk_cap = 16;
};

/// One allocation step. `phase` is the cardinality searched when the bundle
/// was found; MinimalSet bundles record their own size and set `minimal_set`.
/// Agents with a zero estimate receive an empty bundle in phase 0.
struct TraceEvent {
  std::size_t phase = 0;
  AgentId agent = 0;
  std::vector<ItemId> bundle;
  Rational value;
  Rational threshold;
  bool minimal_set = false;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// `phase=2 agent=0 bundle=[0,1] value=80/107 threshold=1/2`
inline std::string trace_line(const TraceEvent& e) {
  std::string b;
  for (std::size_t k = 0; k < e.bundle.size(); ++k) {
    if (k != 0) b += ",";
    b += std::to_string(e.bundle[k]);
  }
  return "phase=" + std::to_string(e.phase) + " agent=" + std::to_string(e.agent) + " bundle=[" + b +
         "] value=" + e.value.str() + " threshold=" + e.threshold.str();
}

struct Allocation {
  std::size_t item_count = 0;
  /// Indexed by agent; nullopt for unallocated agents.
  std::vector<std::optional<ItemSet>> bundles;
  std::vector<TraceEvent> trace;
  std::vector<AgentId> unallocated;

  std::size_t allocated_count() const {
    return static_cast<std::size_t>(std::count_if(bundles.begin(), bundles.end(), [](const auto& b) { return b.has_value(); }));
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Per-agent estimates of the maximin share.
using EstimateVector = std::vector<Rational>;

namespace detail {

/// Agents of one run, grouped by identical value tables so that a bundle is
/// valued once per group. Each group owns one oracle; its queries are counted
/// on the group's first agent.
class AgentPool {
 public:
  AgentPool(const SetSystem& spec, std::span<const Valuation> valuations) : spec_(&spec) {
    group_of_.resize(valuations.size());
    for (std::size_t a = 0; a < valuations.size(); ++a) {
      std::size_t g = 0;
      for (; g < reps_.size(); ++g) {
        if (valuations[a] == *reps_[g]) break;
      }
      if (g == reps_.size()) {
        reps_.push_back(&valuations[a]);
        oracles_.push_back(std::make_unique<ValuationOracle>(spec, valuations[a]));
      }
      group_of_[a] = g;
    }
  }

  std::size_t agent_count() const noexcept { return group_of_.size(); }
  std::size_t group_count() const noexcept { return reps_.size(); }
  std::size_t group_of(AgentId a) const { return group_of_.at(a); }
  const Valuation& group_valuation(std::size_t g) const { return *reps_[g]; }
  Rational group_value(std::size_t g, const ItemSet& s) const { return oracles_[g]->value(s); }
  Rational value(AgentId a, const ItemSet& s) const { return group_value(group_of(a), s); }

  /// Items by ascending (value, id) for group g; built on first use.
  const std::vector<ItemId>& removal_order(std::size_t g) const {
    if (removal_.size() < reps_.size()) removal_.resize(reps_.size());
    auto& order = removal_[g];
    if (order.empty() && spec_->item_count() != 0) {
      const auto& v = reps_[g]->values();
      order.resize(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) order[j] = static_cast<ItemId>(j);
      std::stable_sort(order.begin(), order.end(), [&](ItemId x, ItemId y) { return v[x] < v[y]; });
    }
    return order;
  }

 private:
  const SetSystem* spec_;
  std::vector<std::size_t> group_of_;
  std::vector<const Valuation*> reps_;
  std::vector<std::unique_ptr<ValuationOracle>> oracles_;
  mutable std::vector<std::vector<ItemId>> removal_;
};

/// Group values for one fixed item set, computed on demand.
class ValueCache {
 public:
  ValueCache(const AgentPool& pool, const ItemSet& s) : pool_(pool), s_(s), values_(pool.group_count()) {}
  const Rational& get(std::size_t g) {
    if (!values_[g]) values_[g] = pool_.group_value(g, s_);
    return *values_[g];
  }
  void set(std::size_t g, Rational v) { values_[g] = std::move(v); }

 private:
  const AgentPool& pool_;
  const ItemSet& s_;
  std::vector<std::optional<Rational>> values_;
};

/// a/ta > b/tb for positive thresholds, without division.
inline bool ratio_greater(const Rational& a, const Rational& ta, const Rational& b, const Rational& tb) {
  return a * tb > b * ta;
}

struct MinimalSetOutcome {
  ItemSet items;
  AgentId agent = 0;
  Rational value;
};

/// Lowest-index agent of every (value table, threshold) class among
/// `agents`. Agents of one class always tie, and ties go to the lower index,
/// so only representatives need to be consulted.
inline std::vector<AgentId> class_representatives(const AgentPool& pool, std::span<const AgentId> agents,
                                                  std::span<const Rational> thresholds) {
  std::map<std::pair<std::size_t, Rational>, AgentId> first;
  std::vector<AgentId> reps;
  for (AgentId a : agents) {
    if (first.emplace(std::make_pair(pool.group_of(a), thresholds[a]), a).second) reps.push_back(a);
  }
  return reps;
}

/// Shrinks `items` to a set that some agent values at its threshold but that
/// loses that property for the chosen agent when any single item is removed.
///
/// Each round picks the agent with the largest value-to-threshold ratio
/// (lowest index on ties) and removes the first item, in that agent's
/// removal order, whose removal keeps the agent at threshold. An item that is
/// not removable for an agent stays so as the set shrinks, so a per-agent
/// cursor never needs to move back.
inline MinimalSetOutcome run_minimal_set(const AgentPool& pool, std::span<const AgentId> agents, ItemSet items,
                                         std::span<const Rational> thresholds) {
  if (agents.empty()) throw NoEligibleAgentError("MinimalSet called with no agents");
  const std::vector<AgentId> reps = class_representatives(pool, agents, thresholds);
  std::vector<std::size_t> cursor(pool.agent_count(), 0);
  std::optional<std::pair<std::size_t, Rational>> carried;  // group value of the current set, if known

  for (bool first = true;; first = false) {
    ValueCache cache(pool, items);
    if (carried) cache.set(carried->first, carried->second);
    carried.reset();

    AgentId best = reps.front();
    Rational best_value = cache.get(pool.group_of(best));
    for (std::size_t k = 1; k < reps.size(); ++k) {
      AgentId a = reps[k];
      const Rational& v = cache.get(pool.group_of(a));
      if (ratio_greater(v, thresholds[a], best_value, thresholds[best])) {
        best = a;
        best_value = v;
      }
    }
    if (first && best_value < thresholds[best]) {
      throw NoEligibleAgentError("MinimalSet: no remaining agent values the items at its threshold");
    }

    const std::size_t g = pool.group_of(best);
    const auto& order = pool.removal_order(g);
    std::size_t& pos = cursor[best];
    bool removed = false;
    for (; pos < order.size(); ++pos) {
      ItemId s = order[pos];
      if (!items.contains(s)) continue;
      ItemSet smaller = items;
      smaller.erase(s);
      Rational v = pool.group_value(g, smaller);
      if (v >= thresholds[best]) {
        items = std::move(smaller);
        carried.emplace(g, std::move(v));
        removed = true;
        break;
      }
    }
    if (!removed) return {std::move(items), best, std::move(best_value)};
  }
}

/// Shared state of one allocation procedure run.
class AllocationRun {
 public:
  AllocationRun(const Instance& inst, std::vector<Rational> thresholds, const AllocatorOptions& opts)
      : inst_(inst), pool_(inst.spec, inst.valuations), thresholds_(std::move(thresholds)),
        remaining_items_(ItemSet::full(inst.m())), active_(inst.n(), true) {
    const std::size_t m = inst.m();
    if (opts.use_equivalence_classes) {
      blocks_ = equivalence_classes(inst.spec, inst.valuations);
    } else {
      for (ItemId j = 0; j < m; ++j) blocks_.push_back({j});
    }
    std::vector<AgentId> all(inst.n());
    for (AgentId a = 0; a < all.size(); ++a) all[a] = a;
    auto reps = class_representatives(pool_, all, thresholds_);
    agent_class_.resize(inst.n());
    for (AgentId a = 0; a < all.size(); ++a) {
      for (std::size_t c = 0; c < reps.size(); ++c) {
        if (pool_.group_of(a) == pool_.group_of(reps[c]) && thresholds_[a] == thresholds_[reps[c]]) {
          agent_class_[a] = c;
          break;
        }
      }
    }
    class_count_ = reps.size();
    first_rem_.assign(blocks_.size(), 0);
    chosen_.resize(blocks_.size());
    result_.item_count = m;
    result_.bundles.assign(inst.n(), std::nullopt);
  }

  std::size_t block_count() const noexcept { return blocks_.size(); }
  const ItemSet& remaining_items() const noexcept { return remaining_items_; }

  std::vector<AgentId> active_agents() const {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < active_.size(); ++a) {
      if (active_[a]) out.push_back(a);
    }
    return out;
  }

  /// Lowest-index active agent valuing `s` at its threshold.
  std::optional<std::pair<AgentId, Rational>> first_accepting(const ItemSet& s) const {
    ValueCache cache(pool_, s);
    std::vector<bool> rejected(class_count_, false);
    for (AgentId a = 0; a < active_.size(); ++a) {
      if (!active_[a] || rejected[agent_class_[a]]) continue;
      const Rational& v = cache.get(pool_.group_of(a));
      if (v >= thresholds_[a]) return std::make_pair(a, v);
      rejected[agent_class_[a]] = true;
    }
    return std::nullopt;
  }

  bool anyone_accepts_remaining() const { return first_accepting(remaining_items_).has_value(); }

  void allocate(AgentId a, const ItemSet& bundle, Rational value, std::size_t phase, bool via_minimal_set) {
    result_.bundles[a] = bundle;
    result_.trace.push_back({phase, a, bundle.items(), std::move(value), thresholds_[a], via_minimal_set});
    active_[a] = false;
    remaining_items_ -= bundle;
  }

  /// Repeatedly allocates the lexicographically first size-`tau` bundle that
  /// some active agent accepts. Later searches resume after the first item of
  /// the previous hit: every earlier candidate was already rejected by a
  /// superset of the active agents.
  void run_phase(std::size_t tau) {
    std::optional<ItemId> after;
    while (true) {
      auto hit = search(tau, after);
      if (!hit) return;
      after = hit->items.front();
      ItemSet bundle(inst_.m(), std::span<const ItemId>(hit->items));
      allocate(hit->agent, bundle, std::move(hit->value), tau, false);
    }
  }

  void run_minimal_set_loop() {
    while (anyone_accepts_remaining()) {
      auto agents = active_agents();
      auto out = run_minimal_set(pool_, agents, remaining_items_, thresholds_);
      std::size_t size = out.items.size();
      allocate(out.agent, out.items, std::move(out.value), size, true);
    }
  }

  Allocation finish() {
    result_.unallocated = active_agents();
    return std::move(result_);
  }

  bool any_active() const { return std::find(active_.begin(), active_.end(), true) != active_.end(); }

 private:
  struct Hit {
    std::vector<ItemId> items;
    AgentId agent;
    Rational value;
  };

  std::size_t next_remaining(std::size_t b, std::size_t from) const {
    const auto& mem = blocks_[b];
    while (from < mem.size() && !remaining_items_.contains(mem[from])) ++from;
    return from;
  }

  // Depth-first search over canonical tuples: within a block, members are
  // taken lowest-id first, so each multiset of blocks is tried once, as its
  // lexicographically smallest realisation.
  std::optional<Hit> search(std::size_t tau, std::optional<ItemId> after) {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      first_rem_[b] = next_remaining(b, first_rem_[b]);
      chosen_[b].clear();
    }
    prefix_.clear();
    std::optional<Hit> hit;
    descend(tau, after, hit);
    return hit;
  }

  bool descend(std::size_t tau, std::optional<ItemId> after, std::optional<Hit>& hit) {
    if (prefix_.size() == tau) {
      ItemSet s(inst_.m(), std::span<const ItemId>(prefix_));
      auto acc = first_accepting(s);
      if (!acc) return false;
      hit = Hit{prefix_, acc->first, std::move(acc->second)};
      return true;
    }
    struct Cand {
      ItemId item;
      std::size_t block;
      std::size_t pos;
    };
    std::vector<Cand> cands;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      std::size_t pos = chosen_[b].empty() ? first_rem_[b] : next_remaining(b, chosen_[b].back() + 1);
      if (pos >= blocks_[b].size()) continue;
      ItemId item = blocks_[b][pos];
      if (!prefix_.empty() && item < prefix_.back()) continue;
      if (prefix_.empty() && after && item <= *after) continue;
      cands.push_back({item, b, pos});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.item < y.item; });
    for (const auto& c : cands) {
      prefix_.push_back(c.item);
      chosen_[c.block].push_back(c.pos);
      if (descend(tau, after, hit)) return true;
      chosen_[c.block].pop_back();
      prefix_.pop_back();
    }
    return false;
  }

  const Instance& inst_;
  AgentPool pool_;
  std::vector<Rational> thresholds_;
  ItemSet remaining_items_;
  std::vector<bool> active_;
  std::vector<std::size_t> agent_class_;
  std::size_t class_count_ = 0;
  std::vector<std::vector<ItemId>> blocks_;
  std::vector<std::size_t> first_rem_;
  std::vector<std::vector<std::size_t>> chosen_;
  std::vector<ItemId> prefix_;
  Allocation result_;
};

}  // namespace detail

/// Exhaustive reference procedure: for tau = 1..m, repeatedly hand the
/// lexicographically first size-tau bundle worth at least `alpha` to the
/// lowest-index agent accepting it. Valuations are used as given (callers
/// normalize them first).
///
/// Throws SizeError when m exceeds the desk cap and the items do not collapse
/// into at most that many blocks of interchangeable items.
inline Allocation allocate_naive(const Instance& inst, const Rational& alpha, const AllocatorOptions& opts = {}) {
  inst.validate();
  if (alpha.sign() <= 0) throw ConfigError("alpha must be positive");
  detail::AllocationRun run(inst, std::vector<Rational>(inst.n(), alpha), opts);
  if (inst.m() > opts.naive_desk_cap && run.block_count() > opts.naive_desk_cap) {
    throw SizeError("exhaustive procedure refused: " + std::to_string(inst.m()) + " items in " +
                    std::to_string(run.block_count()) + " blocks exceeds desk cap " +
                    std::to_string(opts.naive_desk_cap));
  }
  for (std::size_t tau = 1; tau <= inst.m(); ++tau) {
    if (!run.any_active() || tau > run.remaining_items().size()) break;
    // Values are monotone: if nobody accepts everything left, nobody accepts
    // any subset of it.
    if (!run.anyone_accepts_remaining()) break;
    run.run_phase(tau);
  }
  return run.finish();
}

/// MinimalSet over explicit arguments. `thresholds` is indexed by agent id and
/// must be positive for every listed agent; `agents` lists the candidates in
/// ascending order.
inline std::pair<ItemSet, AgentId> minimal_set(const SetSystem& spec, std::span<const Valuation> valuations,
                                               std::span<const AgentId> agents, const ItemSet& items,
                                               std::span<const Rational> thresholds, const TieBreakConfig& = {}) {
  spec.require_ground(items);
  for (AgentId a : agents) {
    if (a >= valuations.size() || a >= thresholds.size()) throw InputError("agent id out of range");
    if (thresholds[a].sign() <= 0) throw InputError("MinimalSet needs positive thresholds");
  }
  detail::AgentPool pool(spec, valuations);
  auto out = detail::run_minimal_set(pool, agents, items, thresholds);
  return {std::move(out.items), out.agent};
}

/// Polynomial variant against per-agent thresholds alpha * mu_i: exhaustive
/// phases for bundle sizes 1..3, then MinimalSet bundles while some agent
/// still values the remaining items at its threshold. Agents with mu_i = 0
/// receive the empty bundle up front.
inline Allocation allocate_from_estimates(const Instance& inst, std::span<const Rational> mu, const Rational& alpha,
                                          const AllocatorOptions& opts = {}) {
  inst.validate();
  if (alpha.sign() <= 0) throw ConfigError("alpha must be positive");
  if (mu.size() != inst.n()) throw InputError("estimate vector size differs from agent count");
  std::vector<Rational> thresholds;
  thresholds.reserve(mu.size());
  for (const auto& x : mu) {
    if (x.sign() < 0) throw InputError("negative estimate " + x.str());
    thresholds.push_back(alpha * x);
  }
  detail::AllocationRun run(inst, thresholds, opts);
  for (AgentId a = 0; a < mu.size(); ++a) {
    if (mu[a].is_zero()) run.allocate(a, ItemSet(inst.m()), Rational(0), 0, false);
  }
  for (std::size_t tau = 1; tau <= 3; ++tau) {
    if (!run.any_active() || tau > run.remaining_items().size()) break;
    if (!run.anyone_accepts_remaining()) break;
    run.run_phase(tau);
  }
  if (run.any_active()) run.run_minimal_set_loop();
  return run.finish();
}

/// Smallest k >= 0 with m * (1 - delta)^k <= 1, i.e. ceil(log m / log(1/(1-delta))).
inline std::size_t shrink_steps(std::size_t m, const Rational& delta) {
  if (!(delta.sign() > 0 && delta < Rational(1))) throw ConfigError("delta must lie in (0, 1)");
  Rational x(static_cast<std::int64_t>(m));
  const Rational keep = Rational(1) - delta;
  std::size_t k = 0;
  while (x > Rational(1)) {
    x *= keep;
    ++k;
  }
  return k;
}

/// Outer-loop bound n * ceil(log_{1/(1-delta)} m) + 1.
inline std::size_t iteration_bound(std::size_t n, std::size_t m, const Rational& delta) {
  return n * shrink_steps(m, delta) + 1;
}

/// Item values with items whose singleton is infeasible set to zero. The
/// estimate bounds hold for these values on any hereditary family.
inline Valuation singleton_values(const SetSystem& spec, const Valuation& val) {
  std::vector<Rational> v = val.values();
  bool changed = false;
  for (ItemId j = 0; j < v.size(); ++j) {
    if (!v[j].is_zero() && !spec.is_feasible(ItemSet(spec.item_count(), {j}))) {
      v[j] = 0;
      changed = true;
    }
  }
  return changed ? Valuation(std::move(v)) : Valuation(val.table());
}

struct FairDivideIteration {
  EstimateVector mu;  // estimates used in this iteration
  std::vector<AgentId> unallocated;
};

struct FairDivision {
  Allocation allocation;
  EstimateVector mu;
  std::size_t iterations = 0;
  std::vector<FairDivideIteration> history;
};

/// Estimate-driven driver: start every estimate at m times the agent's n-th
/// best single item, run allocate_from_estimates afresh, and shrink the
/// estimates of unallocated agents by (1 - delta) until everyone is served.
inline FairDivision fair_divide(const Instance& inst, const Rational& alpha, const Rational& delta,
                                const AllocatorOptions& opts = {}) {
  inst.validate();
  if (alpha.sign() <= 0) throw ConfigError("alpha must be positive");
  const std::size_t bound = iteration_bound(inst.n(), inst.m(), delta);
  const Rational keep = Rational(1) - delta;

  FairDivision out;
  out.mu.reserve(inst.n());
  for (const auto& v : inst.valuations) {
    out.mu.push_back(Rational(static_cast<std::int64_t>(inst.m())) * nth_value(singleton_values(inst.spec, v), inst.n()));
  }
  // The bound is a theorem; the cap only stops a runaway loop if it is broken.
  const std::size_t cap = 4 * bound + 16;
  while (true) {
    ++out.iterations;
    out.allocation = allocate_from_estimates(inst, out.mu, alpha, opts);
    out.history.push_back({out.mu, out.allocation.unallocated});
    if (out.allocation.unallocated.empty()) return out;
    if (out.iterations >= cap) throw Error("fair_divide did not converge within " + std::to_string(cap) + " iterations");
    for (AgentId a : out.allocation.unallocated) out.mu[a] *= keep;
  }
}

struct Violation {
  enum class Kind { Overlap, OutsideGroundSet, BelowFloor, Malformed } kind;
  AgentId agent = 0;
  std::string message;
};

struct VerificationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline std::string_view violation_kind_name(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Overlap: return "overlap";
    case Violation::Kind::OutsideGroundSet: return "outside-ground-set";
    case Violation::Kind::BelowFloor: return "below-floor";
    case Violation::Kind::Malformed: return "malformed";
  }
  return "?";
}

/// Checks disjointness, ground-set membership and v_i(S_i) >= floor_i for every
/// allocated agent. Reports every violation found.
inline VerificationReport verify_allocation(const Instance& inst, const Allocation& alloc,
                                            std::span<const Rational> floors) {
  VerificationReport rep;
  const std::size_t m = inst.m();
  if (alloc.bundles.size() != inst.n()) {
    rep.violations.push_back({Violation::Kind::Malformed, 0,
                              "allocation has " + std::to_string(alloc.bundles.size()) + " agents, instance has " +
                                  std::to_string(inst.n())});
  }
  if (floors.size() != inst.n()) throw InputError("floor vector size differs from agent count");

  std::vector<AgentId> owner(m, std::numeric_limits<AgentId>::max());
  const std::size_t agents = std::min(alloc.bundles.size(), inst.n());
  for (AgentId a = 0; a < agents; ++a) {
    if (!alloc.bundles[a]) continue;
    ItemSet inside(m);
    alloc.bundles[a]->for_each([&](ItemId j) {
      if (j >= m) {
        rep.violations.push_back({Violation::Kind::OutsideGroundSet, a, "item " + std::to_string(j) + " is not in the ground set"});
        return;
      }
      inside.insert(j);
      if (owner[j] != std::numeric_limits<AgentId>::max()) {
        rep.violations.push_back({Violation::Kind::Overlap, a,
                                  "item " + std::to_string(j) + " also allocated to agent " + std::to_string(owner[j])});
      } else {
        owner[j] = a;
      }
    });
    Rational v = bundle_value(inst.spec, inst.valuations[a], inside);
    if (v < floors[a]) {
      rep.violations.push_back({Violation::Kind::BelowFloor, a,
                                "bundle value " + v.str() + " below floor " + floors[a].str()});
    }
  }
  return rep;
}

}  // namespace hmms
