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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hmms/errors.hpp"
#include "hmms/item_set.hpp"
#include "hmms/rational.hpp"
#include "hmms/set_system.hpp"

namespace hmms {

/// One agent's additive item values plus a counter of bundle-value queries.
///
/// The value table is immutable and may be shared between agents (identical
/// agents in large instances point at one table). The counter is per object
/// and is the only mutable state; it is atomic so concurrent readers may
/// count, with exact totals whenever calls are serialized.
class Valuation {
 public:
  Valuation() : values_(std::make_shared<const std::vector<Rational>>()) {}
  explicit Valuation(std::vector<Rational> values)
      : Valuation(std::make_shared<const std::vector<Rational>>(std::move(values))) {}
  explicit Valuation(std::shared_ptr<const std::vector<Rational>> values) : values_(std::move(values)) {
    if (!values_) throw InputError("null value table");
    for (const auto& v : *values_) {
      if (v.sign() < 0) throw InputError("negative item value " + v.str());
    }
  }

  Valuation(const Valuation& o) : values_(o.values_), queries_(o.queries()) {}
  Valuation& operator=(const Valuation& o) {
    values_ = o.values_;
    queries_.store(o.queries(), std::memory_order_relaxed);
    return *this;
  }

  const std::vector<Rational>& values() const noexcept { return *values_; }
  const std::shared_ptr<const std::vector<Rational>>& table() const noexcept { return values_; }
  const Rational& operator[](ItemId j) const { return values_->at(j); }
  std::size_t item_count() const noexcept { return values_->size(); }

  std::uint64_t queries() const noexcept { return queries_.load(std::memory_order_relaxed); }
  void reset_queries() const noexcept { queries_.store(0, std::memory_order_relaxed); }
  void count_query() const noexcept { queries_.fetch_add(1, std::memory_order_relaxed); }

  /// Equality of value tables; the query counter is not part of the value.
  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.values_ == b.values_ || *a.values_ == *b.values_;
  }

 private:
  std::shared_ptr<const std::vector<Rational>> values_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

/// Precomputed evaluator of v(S) = max over feasible T within S of the sum of
/// item values in T, for one (set system, valuation) pair.
///
/// Values are rescaled to integers over a common denominator so the hot path
/// only adds integers. For capacity systems, items of one class with equal
/// value form a group; v(S) takes, per class, the highest-value groups first
/// up to the class capacity. For explicit systems v(S) is the best sum of
/// S ∩ M over maximal sets M.
///
/// Every call to value() counts one query on the underlying valuation. The
/// oracle keeps a pointer to both arguments; they must outlive it.
class ValuationOracle {
  using Word = std::uint64_t;

  struct Group {
    std::size_t first_word = 0;
    std::vector<Word> mask;
    BigInt weight;
  };
  struct ClassPlan {
    std::size_t capacity = 0;
    std::vector<Group> groups;  // descending weight, zero weights dropped
  };

 public:
  ValuationOracle(const SetSystem& spec, const Valuation& val) : spec_(&spec), val_(&val) {
    const std::size_t m = spec.item_count();
    if (val.item_count() != m) throw InputError("valuation defined on the wrong number of items");
    const auto& values = val.values();

    scale_ = 1;
    for (const auto& v : values) {
      BigInt d = v.denominator();
      if (scale_ % d != 0) scale_ = scale_ / boost::multiprecision::gcd(scale_, d) * d;
    }
    weights_.reserve(m);
    for (const auto& v : values) weights_.push_back(v.numerator() * (scale_ / v.denominator()));

    if (spec.is_capacity()) build_capacity_plan();
  }

  const Valuation& valuation() const noexcept { return *val_; }
  const SetSystem& set_system() const noexcept { return *spec_; }

  Rational value(const ItemSet& s) const {
    spec_->require_ground(s);
    val_->count_query();
    BigInt total = 0;
    if (spec_->is_capacity()) {
      for (const auto& plan : plan_) {
        std::size_t room = plan.capacity;
        for (const auto& g : plan.groups) {
          if (room == 0) break;
          std::size_t c = s.count_in_band(g.first_word, g.mask);
          if (c == 0) continue;
          std::size_t take = std::min(c, room);
          total += g.weight * take;
          room -= take;
        }
      }
    } else {
      for (const auto& max : spec_->as_explicit().maximal_sets) {
        BigInt sum = 0;
        (s & max).for_each([&](ItemId j) { sum += weights_[j]; });
        if (sum > total) total = sum;
      }
    }
    return Rational(total, scale_);
  }

 private:
  void build_capacity_plan() {
    const auto& cap = spec_->as_capacity();
    for (const auto& cls : cap.classes) {
      ClassPlan plan;
      plan.capacity = cls.capacity;
      auto members = cls.members.items();
      std::stable_sort(members.begin(), members.end(),
                       [&](ItemId a, ItemId b) { return weights_[a] > weights_[b]; });
      std::size_t i = 0;
      while (i < members.size()) {
        std::size_t k = i;
        while (k < members.size() && weights_[members[k]] == weights_[members[i]]) ++k;
        if (weights_[members[i]] != 0) plan.groups.push_back(make_group(members, i, k));
        i = k;
      }
      plan_.push_back(std::move(plan));
    }
  }

  Group make_group(const std::vector<ItemId>& members, std::size_t from, std::size_t to) const {
    ItemId lo = members[from];
    ItemId hi = members[from];
    for (std::size_t k = from; k < to; ++k) {
      lo = std::min(lo, members[k]);
      hi = std::max(hi, members[k]);
    }
    Group g;
    g.first_word = lo / 64;
    g.mask.assign(hi / 64 - lo / 64 + 1, 0);
    for (std::size_t k = from; k < to; ++k) g.mask[members[k] / 64 - g.first_word] |= Word{1} << (members[k] % 64);
    g.weight = weights_[members[from]];
    return g;
  }

  const SetSystem* spec_;
  const Valuation* val_;
  BigInt scale_;
  std::vector<BigInt> weights_;
  std::vector<ClassPlan> plan_;
};

/// Value of `s` to the agent: the best total over feasible subsets of `s`.
/// Builds a one-off oracle; hot loops should hold a ValuationOracle instead.
inline Rational bundle_value(const SetSystem& spec, const Valuation& val, const ItemSet& s) {
  return ValuationOracle(spec, val).value(s);
}

/// The n-th largest item value (1-based), or zero when n exceeds the item count.
inline Rational nth_value(const Valuation& val, std::size_t n) {
  if (n == 0) throw InputError("nth_value needs n >= 1");
  if (n > val.item_count()) return Rational(0);
  std::vector<Rational> v = val.values();
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n - 1), v.end(), std::greater<>());
  return v[n - 1];
}

/// Rescales item values so every part of `partition` is worth exactly one:
/// item j in part P gets v_j / v(P).
inline Valuation normalize_to_partition(const Valuation& val, std::span<const ItemSet> partition,
                                        const SetSystem& spec) {
  const std::size_t m = spec.item_count();
  ItemSet covered(m);
  for (const auto& part : partition) {
    spec.require_ground(part);
    if (covered.intersects(part)) throw InputError("partition parts overlap");
    covered |= part;
  }
  if (covered.size() != m) throw InputError("partition does not cover every item");

  ValuationOracle oracle(spec, val);
  std::vector<Rational> scaled = val.values();
  for (const auto& part : partition) {
    Rational pv = oracle.value(part);
    if (pv.is_zero()) throw DegenerateInputError("cannot normalize against a part of value 0: " + part.str());
    part.for_each([&](ItemId j) { scaled[j] /= pv; });
  }
  return Valuation(std::move(scaled));
}

}  // namespace hmms
