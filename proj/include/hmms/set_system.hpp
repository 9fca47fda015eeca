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
#include <map>
#include <ranges>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hmms/errors.hpp"
#include "hmms/item_set.hpp"
#include "hmms/rational.hpp"

namespace hmms {

/// One block of a class-capacity system: at most `capacity` of `members` may
/// appear together in a feasible set.
struct CapacityClass {
  ItemSet members;
  std::size_t capacity = 0;

  friend bool operator==(const CapacityClass&, const CapacityClass&) = default;
};

/// A hereditary (downward-closed) family of feasible item sets.
///
/// Two concrete representations are supported:
///  - explicit maximal sets: feasible iff contained in one listed set;
///  - class capacities (a partition matroid): feasible iff every class
///    contributes at most its capacity.
///
/// Immutable after construction.
class SetSystem {
 public:
  struct ExplicitMaximal {
    std::vector<ItemSet> maximal_sets;
    friend bool operator==(const ExplicitMaximal&, const ExplicitMaximal&) = default;
  };
  struct Capacity {
    std::vector<CapacityClass> classes;
    std::vector<std::uint32_t> class_of;  // item -> class index
    friend bool operator==(const Capacity&, const Capacity&) = default;
  };

  SetSystem() = default;

  /// Builds the downward closure of `sets`. Sets contained in another listed
  /// set (including duplicates) are dropped; survivors keep input order.
  static SetSystem explicit_maximal(std::size_t m, std::vector<ItemSet> sets) {
    for (const auto& s : sets) {
      if (s.universe() != m) throw InputError("maximal set over a ground set of the wrong size");
    }
    std::vector<ItemSet> kept;
    for (std::size_t a = 0; a < sets.size(); ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < sets.size() && !dominated; ++b) {
        if (a == b || !sets[a].is_subset_of(sets[b])) continue;
        // equal sets: keep the first copy only
        dominated = !(sets[a] == sets[b]) || b < a;
      }
      if (!dominated) kept.push_back(sets[a]);
    }
    SetSystem s;
    s.m_ = m;
    s.repr_ = ExplicitMaximal{std::move(kept)};
    return s;
  }

  /// The family of all subsets.
  static SetSystem free(std::size_t m) { return explicit_maximal(m, {ItemSet::full(m)}); }

  /// Classes must partition {0, ..., m-1}.
  static SetSystem capacity(std::size_t m, std::vector<CapacityClass> classes) {
    std::vector<std::uint32_t> class_of(m, UINT32_MAX);
    for (std::size_t k = 0; k < classes.size(); ++k) {
      if (classes[k].members.universe() != m) throw InputError("capacity class over a ground set of the wrong size");
      classes[k].members.for_each([&](ItemId j) {
        if (class_of[j] != UINT32_MAX) throw InputError("item " + std::to_string(j) + " appears in two capacity classes");
        class_of[j] = static_cast<std::uint32_t>(k);
      });
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (class_of[j] == UINT32_MAX) throw InputError("item " + std::to_string(j) + " is in no capacity class");
    }
    SetSystem s;
    s.m_ = m;
    s.repr_ = Capacity{std::move(classes), std::move(class_of)};
    return s;
  }

  std::size_t item_count() const noexcept { return m_; }

  bool is_explicit() const noexcept { return std::holds_alternative<ExplicitMaximal>(repr_); }
  bool is_capacity() const noexcept { return std::holds_alternative<Capacity>(repr_); }
  const ExplicitMaximal& as_explicit() const { return std::get<ExplicitMaximal>(repr_); }
  const Capacity& as_capacity() const { return std::get<Capacity>(repr_); }

  bool is_feasible(const ItemSet& s) const {
    require_ground(s);
    if (const auto* e = std::get_if<ExplicitMaximal>(&repr_)) {
      if (s.empty()) return true;
      return std::any_of(e->maximal_sets.begin(), e->maximal_sets.end(),
                         [&](const ItemSet& max) { return s.is_subset_of(max); });
    }
    const auto& c = std::get<Capacity>(repr_);
    return std::all_of(c.classes.begin(), c.classes.end(),
                       [&](const CapacityClass& k) { return s.intersection_size(k.members) <= k.capacity; });
  }

  void require_ground(const ItemSet& s) const {
    if (s.universe() != m_) {
      throw InputError("item set over ground set of size " + std::to_string(s.universe()) +
                       ", expected " + std::to_string(m_));
    }
  }

  /// Expands a capacity system into its maximal sets (every way of taking
  /// min(capacity, |class|) items from each class). Desk scale only.
  SetSystem to_explicit(std::size_t max_sets = 1U << 16) const {
    if (is_explicit()) return *this;
    const auto& c = as_capacity();
    std::vector<ItemSet> acc{ItemSet(m_)};
    for (const auto& k : c.classes) {
      auto members = k.members.items();
      std::size_t take = std::min(k.capacity, members.size());
      std::vector<ItemSet> choices;
      std::vector<ItemId> pick;
      auto rec = [&](auto&& self, std::size_t from) -> void {
        if (pick.size() == take) {
          choices.emplace_back(m_, std::span<const ItemId>(pick));
          return;
        }
        for (std::size_t i = from; i + (take - pick.size()) <= members.size(); ++i) {
          pick.push_back(members[i]);
          self(self, i + 1);
          pick.pop_back();
        }
      };
      rec(rec, 0);
      std::vector<ItemSet> next;
      for (const auto& a : acc) {
        for (const auto& b : choices) {
          next.push_back(a | b);
          if (next.size() > max_sets) throw SizeError("explicit expansion exceeds " + std::to_string(max_sets) + " sets");
        }
      }
      acc = std::move(next);
    }
    return explicit_maximal(m_, std::move(acc));
  }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  std::size_t m_ = 0;
  std::variant<ExplicitMaximal, Capacity> repr_;
};

/// Partitions the items into blocks of interchangeable items: same value for
/// every agent and same role in the set system (same capacity class, or the
/// same membership pattern across maximal sets). Swapping two items of one
/// block maps feasible sets to feasible sets and preserves every agent's value.
///
/// `valuations` is a range of objects exposing `values()` (a vector of
/// Rational indexed by item). Blocks are ordered by their smallest item and
/// list members in ascending order.
template <std::ranges::input_range Valuations>
std::vector<std::vector<ItemId>> equivalence_classes(const SetSystem& spec, const Valuations& valuations) {
  const std::size_t m = spec.item_count();
  std::vector<std::vector<std::uint64_t>> key(m);

  if (spec.is_capacity()) {
    const auto& c = spec.as_capacity();
    for (std::size_t j = 0; j < m; ++j) key[j].push_back(c.class_of[j]);
  } else {
    const auto& sets = spec.as_explicit().maximal_sets;
    std::map<std::vector<bool>, std::uint64_t> pattern_id;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<bool> pattern(sets.size());
      for (std::size_t k = 0; k < sets.size(); ++k) pattern[k] = sets[k].contains(static_cast<ItemId>(j));
      auto [it, inserted] = pattern_id.emplace(std::move(pattern), pattern_id.size());
      key[j].push_back(it->second);
    }
  }

  // Identical agents usually share storage; rank each distinct value table once.
  std::vector<const std::vector<Rational>*> seen;
  for (const auto& v : valuations) {
    const std::vector<Rational>* table = &v.values();
    if (table->size() != m) throw InputError("valuation defined on the wrong number of items");
    if (std::find(seen.begin(), seen.end(), table) != seen.end()) continue;
    seen.push_back(table);
    std::vector<ItemId> order(m);
    for (std::size_t j = 0; j < m; ++j) order[j] = static_cast<ItemId>(j);
    std::sort(order.begin(), order.end(), [&](ItemId a, ItemId b) { return (*table)[a] < (*table)[b]; });
    std::uint64_t rank = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (r > 0 && (*table)[order[r]] != (*table)[order[r - 1]]) ++rank;
      key[order[r]].push_back(rank);
    }
  }

  std::map<std::vector<std::uint64_t>, std::size_t> block_of;
  std::vector<std::vector<ItemId>> blocks;
  for (std::size_t j = 0; j < m; ++j) {
    auto [it, inserted] = block_of.emplace(std::move(key[j]), blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(static_cast<ItemId>(j));
  }
  return blocks;
}

}  // namespace hmms
