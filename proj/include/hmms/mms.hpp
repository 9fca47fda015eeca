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
#include <optional>
#include <string>
#include <vector>

#include "hmms/errors.hpp"
#include "hmms/item_set.hpp"
#include "hmms/rational.hpp"
#include "hmms/set_system.hpp"
#include "hmms/valuation.hpp"

namespace hmms {

/// n pairwise-disjoint parts covering all items; parts may be empty.
struct Partition {
  std::vector<ItemSet> parts;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Maximin share of one agent. Exact results carry a witness partition and
/// set lower == upper == value; bound results carry only lower and upper.
struct MmsResult {
  bool exact = false;
  Rational value;
  Partition witness;
  Rational lower;
  Rational upper;
};

struct MmsOptions {
  /// Largest item count accepted by the exhaustive search.
  std::size_t max_items = 12;
};

namespace detail {

class MmsSearch {
 public:
  MmsSearch(const ValuationOracle& oracle, std::size_t n) : oracle_(oracle), n_(n), m_(oracle.set_system().item_count()) {}

  void run() {
    std::vector<ItemSet> parts;
    parts.reserve(n_);
    ItemSet rest = ItemSet::full(m_);
    descend(0, parts, rest);
  }

  Rational best_value() const { return *best_; }
  Partition witness() const { return best_parts_; }

 private:
  // Items [0, next) are placed; `rest` holds items [next, m).
  void descend(ItemId next, std::vector<ItemSet>& parts, ItemSet& rest) {
    if (next == m_) {
      Rational worst = parts.size() < n_ ? Rational(0) : oracle_.value(parts[0]);
      for (std::size_t p = parts.size() < n_ ? 0 : 1; p < parts.size() && !worst.is_zero(); ++p) {
        Rational v = oracle_.value(parts[p]);
        if (v < worst) worst = v;
      }
      if (!best_ || worst > *best_) {
        best_ = worst;
        best_parts_.parts = parts;
        best_parts_.parts.resize(n_, ItemSet(m_));
      }
      return;
    }
    if (best_ && !can_beat(parts, rest)) return;

    rest.erase(next);
    for (std::size_t p = 0; p < parts.size(); ++p) {
      parts[p].insert(next);
      descend(next + 1, parts, rest);
      parts[p].erase(next);
    }
    if (parts.size() < n_) {
      parts.emplace_back(m_);
      parts.back().insert(next);
      descend(next + 1, parts, rest);
      parts.pop_back();
    }
    rest.insert(next);
  }

  // Each opened part can at best absorb every unplaced item, and unopened
  // parts can at best receive all of them.
  bool can_beat(const std::vector<ItemSet>& parts, const ItemSet& rest) const {
    if (parts.size() < n_ && !(oracle_.value(rest) > *best_)) return false;
    for (const auto& p : parts) {
      if (!(oracle_.value(p | rest) > *best_)) return false;
    }
    return true;
  }

  const ValuationOracle& oracle_;
  std::size_t n_;
  std::size_t m_;
  std::optional<Rational> best_;
  Partition best_parts_;
};

}  // namespace detail

/// Exact maximin share by exhaustive search over partitions into n unordered
/// parts, with branch-and-bound on the best minimum found so far.
///
/// Parts are enumerated canonically (item k joins an opened part or opens the
/// next one) and a new optimum must be strictly better, so the witness is the
/// first optimal partition in enumeration order.
inline MmsResult mms_exact(const SetSystem& spec, const Valuation& val, std::size_t n, MmsOptions opts = {}) {
  if (n == 0) throw InputError("maximin share needs n >= 1");
  const std::size_t m = spec.item_count();
  if (m > opts.max_items) {
    throw SizeError("exact maximin share refused: " + std::to_string(m) + " items exceeds cap " +
                    std::to_string(opts.max_items));
  }
  ValuationOracle oracle(spec, val);
  detail::MmsSearch search(oracle, n);
  search.run();
  MmsResult r;
  r.exact = true;
  r.value = search.best_value();
  r.witness = search.witness();
  r.lower = r.value;
  r.upper = r.value;
  return r;
}

/// Certified bounds v(n) <= MMS <= m * v(n), where v(n) is the n-th most
/// valuable single item.
inline MmsResult mms_bounds(const Valuation& val, std::size_t n, std::size_t m) {
  MmsResult r;
  r.lower = nth_value(val, n);
  r.upper = Rational(static_cast<std::int64_t>(m)) * r.lower;
  return r;
}

}  // namespace hmms
