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

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hmms/errors.hpp"

namespace hmms {

/// Dense item index in [0, m).
using ItemId = std::uint32_t;
/// Dense agent index in [0, n).
using AgentId = std::uint32_t;

/// Subset of a fixed ground set {0, ..., m-1}, stored as a bitset.
///
/// Sets up to 128 items live inline; larger ground sets spill to the heap.
/// Binary operations require both operands to share the same universe size.
class ItemSet {
  using Word = std::uint64_t;
  static constexpr std::size_t kBits = 64;

 public:
  ItemSet() = default;
  explicit ItemSet(std::size_t universe) : universe_(universe), words_((universe + kBits - 1) / kBits, 0) {}
  ItemSet(std::size_t universe, std::initializer_list<ItemId> items) : ItemSet(universe) {
    for (ItemId j : items) insert(j);
  }
  ItemSet(std::size_t universe, std::span<const ItemId> items) : ItemSet(universe) {
    for (ItemId j : items) insert(j);
  }

  static ItemSet full(std::size_t universe) {
    ItemSet s(universe);
    for (auto& w : s.words_) w = ~Word{0};
    s.trim();
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(ItemId j) const noexcept {
    return j < universe_ && ((words_[j / kBits] >> (j % kBits)) & 1U) != 0;
  }

  void insert(ItemId j) {
    check(j);
    words_[j / kBits] |= Word{1} << (j % kBits);
  }

  void erase(ItemId j) {
    check(j);
    words_[j / kBits] &= ~(Word{1} << (j % kBits));
  }

  std::size_t size() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }

  bool is_subset_of(const ItemSet& other) const {
    same_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if ((words_[k] & ~other.words_[k]) != 0) return false;
    }
    return true;
  }

  bool intersects(const ItemSet& other) const {
    same_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if ((words_[k] & other.words_[k]) != 0) return true;
    }
    return false;
  }

  std::size_t intersection_size(const ItemSet& other) const {
    same_universe(other);
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      c += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
    }
    return c;
  }

  ItemSet& operator|=(const ItemSet& o) {
    same_universe(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  ItemSet& operator&=(const ItemSet& o) {
    same_universe(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  /// Set difference.
  ItemSet& operator-=(const ItemSet& o) {
    same_universe(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend ItemSet operator|(ItemSet a, const ItemSet& b) { return a |= b; }
  friend ItemSet operator&(ItemSet a, const ItemSet& b) { return a &= b; }
  friend ItemSet operator-(ItemSet a, const ItemSet& b) { return a -= b; }

  friend bool operator==(const ItemSet& a, const ItemSet& b) {
    return a.universe_ == b.universe_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }

  /// Calls f(ItemId) for every member in ascending order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w != 0) {
        auto bit = static_cast<std::size_t>(std::countr_zero(w));
        f(static_cast<ItemId>(k * kBits + bit));
        w &= w - 1;
      }
    }
  }

  std::vector<ItemId> items() const {
    std::vector<ItemId> out;
    out.reserve(size());
    for_each([&](ItemId j) { out.push_back(j); });
    return out;
  }

  /// Number of members in words [first, first + mask.size()) that are also set
  /// in `mask`. Used by the valuation oracle for banded group masks.
  std::size_t count_in_band(std::size_t first_word, std::span<const Word> mask) const noexcept {
    std::size_t c = 0;
    for (std::size_t k = 0; k < mask.size(); ++k) {
      c += static_cast<std::size_t>(std::popcount(words_[first_word + k] & mask[k]));
    }
    return c;
  }

  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }

  /// "{0,3,5}"
  std::string str() const {
    std::string out = "{";
    bool first = true;
    for_each([&](ItemId j) {
      if (!first) out += ",";
      out += std::to_string(j);
      first = false;
    });
    return out + "}";
  }

 private:
  void check(ItemId j) const {
    if (j >= universe_) {
      throw InputError("item " + std::to_string(j) + " outside ground set of size " + std::to_string(universe_));
    }
  }
  void same_universe(const ItemSet& o) const {
    if (o.universe_ != universe_) throw InputError("item sets over different ground sets");
  }
  void trim() {
    if (universe_ % kBits != 0 && !words_.empty()) words_.back() &= (Word{1} << (universe_ % kBits)) - 1;
  }

  std::size_t universe_ = 0;
  boost::container::small_vector<Word, 2> words_;
};

}  // namespace hmms
