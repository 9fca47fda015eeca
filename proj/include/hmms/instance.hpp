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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hmms/errors.hpp"
#include "hmms/item_set.hpp"
#include "hmms/rational.hpp"
#include "hmms/set_system.hpp"
#include "hmms/valuation.hpp"

namespace hmms {

/// A fair-division instance: n agents, m items, a hereditary family and one
/// valuation per agent.
struct Instance {
  std::string name;
  std::optional<std::uint64_t> seed;
  SetSystem spec;
  std::vector<Valuation> valuations;
  /// Optional per-item class label (e.g. "A".."F"); empty when unlabelled.
  std::vector<std::string> item_labels;

  std::size_t n() const noexcept { return valuations.size(); }
  std::size_t m() const noexcept { return spec.item_count(); }

  /// True when every agent has the same value table.
  bool identical_agents() const {
    for (std::size_t i = 1; i < valuations.size(); ++i) {
      if (!(valuations[i] == valuations[0])) return false;
    }
    return true;
  }

  void validate() const {
    if (valuations.empty()) throw InputError("instance needs at least one agent");
    for (const auto& v : valuations) {
      if (v.item_count() != m()) throw InputError("valuation defined on the wrong number of items");
    }
    if (!item_labels.empty() && item_labels.size() != m()) throw InputError("item label count differs from m");
  }

  void reset_queries() const {
    for (const auto& v : valuations) v.reset_queries();
  }
  std::uint64_t total_queries() const {
    std::uint64_t q = 0;
    for (const auto& v : valuations) q += v.queries();
    return q;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name == b.name && a.seed == b.seed && a.spec == b.spec && a.valuations == b.valuations &&
           a.item_labels == b.item_labels;
  }
};

/// Copy of `inst` with `n` agents, all sharing agent 0's value table.
inline Instance with_identical_agents(Instance inst, std::size_t n) {
  if (n == 0) throw InputError("instance needs at least one agent");
  if (inst.valuations.empty()) throw InputError("template instance has no agent");
  Valuation proto(inst.valuations.front().table());
  inst.valuations.assign(n, proto);
  return inst;
}

/// The adversarial partition-matroid instance with six item classes A..F.
/// n must be a positive multiple of 330; all agents are identical.
inline Instance table1_instance(std::size_t n) {
  if (n == 0 || n % 330 != 0) throw InputError("table1 instance needs n to be a positive multiple of 330");
  struct Row {
    const char* label;
    std::size_t quantity;
    std::int64_t value_numerator;  // over 107
    std::size_t capacity;
  };
  const Row rows[] = {
      {"A", n, 40, 2},         {"B", n / 3, 23, 1},    {"C", 2 * n / 3, 17, 2},
      {"D", 2 * n / 3, 10, 5}, {"E", n / 3, 4, 11},    {"F", 40 * n, 1, 40},
  };
  std::size_t m = 0;
  for (const auto& r : rows) m += r.quantity;

  Instance inst;
  inst.name = "table1-n" + std::to_string(n);
  std::vector<Rational> values;
  values.reserve(m);
  std::vector<CapacityClass> classes;
  ItemId next = 0;
  for (const auto& r : rows) {
    CapacityClass cls{ItemSet(m), r.capacity};
    for (std::size_t k = 0; k < r.quantity; ++k) {
      cls.members.insert(next++);
      values.emplace_back(BigInt(r.value_numerator), BigInt(107));
      inst.item_labels.emplace_back(r.label);
    }
    classes.push_back(std::move(cls));
  }
  inst.spec = SetSystem::capacity(m, std::move(classes));
  Valuation shared(std::move(values));
  inst.valuations.assign(n, shared);
  return inst;
}

/// Three items a, b, c (ids 0, 1, 2) with maximal feasible sets {a} and
/// {b, c} and values 3, 2, 2. One agent; see with_identical_agents.
inline Instance footnote_instance() {
  Instance inst;
  inst.name = "footnote";
  inst.spec = SetSystem::explicit_maximal(3, {ItemSet(3, {0}), ItemSet(3, {1, 2})});
  inst.valuations.emplace_back(std::vector<Rational>{3, 2, 2});
  inst.item_labels = {"a", "b", "c"};
  return inst;
}

enum class Family { Free, Explicit, Capacity };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::Free: return "free";
    case Family::Explicit: return "explicit";
    case Family::Capacity: return "capacity";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "free") return Family::Free;
  if (s == "explicit" || s == "explicit-antichain") return Family::Explicit;
  if (s == "capacity") return Family::Capacity;
  throw InputError("unknown set-system family '" + std::string(s) + "'");
}

/// Item values are p/q with p uniform in [min_numerator, max_numerator] and
/// q uniform in [1, max_denominator].
struct ValueRange {
  std::int64_t min_numerator = 1;
  std::int64_t max_numerator = 10;
  std::int64_t max_denominator = 4;
};

/// Seeded random instance. Every generated family makes all singletons
/// feasible: explicit families cover every item, capacities are at least one.
inline Instance random_instance(std::uint64_t seed, std::size_t m, std::size_t n, Family family,
                                ValueRange range = {}) {
  if (m == 0 || n == 0) throw InputError("random instance needs m, n >= 1");
  if (range.min_numerator < 0 || range.max_numerator < range.min_numerator || range.max_denominator < 1) {
    throw InputError("invalid value range");
  }
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t k) { return static_cast<std::size_t>(rng() % k); };

  Instance inst;
  inst.name = "random-" + std::string(family_name(family)) + "-m" + std::to_string(m) + "-n" + std::to_string(n);
  inst.seed = seed;

  switch (family) {
    case Family::Free:
      inst.spec = SetSystem::free(m);
      break;
    case Family::Explicit: {
      std::size_t k = 1 + below(m);
      std::vector<ItemSet> sets(k, ItemSet(m));
      for (auto& s : sets) {
        for (ItemId j = 0; j < m; ++j) {
          if (rng() & 1U) s.insert(j);
        }
      }
      for (ItemId j = 0; j < m; ++j) {
        bool covered = false;
        for (const auto& s : sets) covered = covered || s.contains(j);
        if (!covered) sets[below(k)].insert(j);
      }
      inst.spec = SetSystem::explicit_maximal(m, std::move(sets));
      break;
    }
    case Family::Capacity: {
      std::size_t c = 1 + below(m);
      std::vector<ItemSet> members(c, ItemSet(m));
      for (ItemId j = 0; j < m; ++j) members[below(c)].insert(j);
      std::vector<CapacityClass> classes;
      for (auto& mem : members) {
        std::size_t size = mem.size();
        if (size == 0) continue;
        classes.push_back({std::move(mem), 1 + below(size)});
      }
      inst.spec = SetSystem::capacity(m, std::move(classes));
      break;
    }
  }

  const auto span = static_cast<std::uint64_t>(range.max_numerator - range.min_numerator + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> values;
    values.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
      auto num = range.min_numerator + static_cast<std::int64_t>(rng() % span);
      auto den = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(range.max_denominator));
      values.emplace_back(BigInt(num), BigInt(den));
    }
    inst.valuations.emplace_back(std::move(values));
  }
  return inst;
}

}  // namespace hmms
