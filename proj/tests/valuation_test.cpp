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


#include <gtest/gtest.h>

#include "hmms/hmms.hpp"
#include "oracles.hpp"

namespace hmms {
namespace {

using testing::from_mask;
using testing::value_ref;

Rational q(std::int64_t a, std::int64_t b) { return Rational(BigInt(a), BigInt(b)); }

TEST(BundleValue, FootnoteValues) {
  Instance f = footnote_instance();
  const auto& v = f.valuations[0];
  EXPECT_EQ(bundle_value(f.spec, v, ItemSet(3, {0, 2})), Rational(3));
  EXPECT_EQ(bundle_value(f.spec, v, ItemSet(3, {0, 1, 2})), Rational(4));
  EXPECT_EQ(bundle_value(f.spec, v, ItemSet(3, {1, 2})), Rational(4));
  EXPECT_EQ(bundle_value(f.spec, v, ItemSet(3)), Rational(0));
}

TEST(BundleValue, FootnoteIsNotSubmodular) {
  Instance f = footnote_instance();
  auto v = [&](std::initializer_list<ItemId> s) { return bundle_value(f.spec, f.valuations[0], ItemSet(3, s)); };
  Rational gain_big = v({0, 1, 2}) - v({0, 1});
  Rational gain_small = v({0, 2}) - v({0});
  EXPECT_EQ(gain_big, Rational(1));
  EXPECT_EQ(gain_small, Rational(0));
  EXPECT_GT(gain_big, gain_small);
}

TEST(BundleValue, TableOneParts) {
  Instance t = table1_instance(330);
  const std::size_t m = t.m();
  // Items are laid out A(330) B(110) C(220) D(220) E(110) F(13200).
  const ItemId a = 0, b = 330, c = 440, d = 660, e = 880, f = 990;
  ItemSet type1(m, {a, c, d});
  ItemSet type2(m, {a, b, e});
  for (ItemId k = 0; k < 40; ++k) {
    type1.insert(f + k);
    type2.insert(f + k);
  }
  EXPECT_EQ(bundle_value(t.spec, t.valuations[0], type1), Rational(1));
  EXPECT_EQ(bundle_value(t.spec, t.valuations[0], type2), Rational(1));
  ItemSet many_f(m);
  for (ItemId k = 0; k < 41; ++k) many_f.insert(f + k);
  EXPECT_EQ(bundle_value(t.spec, t.valuations[0], many_f), q(40, 107));
}

TEST(BundleValue, CountsOneQueryPerCall) {
  Instance f = footnote_instance();
  f.reset_queries();
  ValuationOracle oracle(f.spec, f.valuations[0]);
  for (int k = 0; k < 5; ++k) oracle.value(ItemSet(3, {0}));
  EXPECT_EQ(f.valuations[0].queries(), 5U);
  EXPECT_TRUE(f.spec.is_feasible(ItemSet(3, {0})));
  EXPECT_EQ(f.valuations[0].queries(), 5U);
}

TEST(Valuation, RejectsNegativeValues) {
  EXPECT_THROW(Valuation({Rational(1), Rational(-1)}), InputError);
}

TEST(NthValue, Examples) {
  Valuation v({Rational(3), Rational(2), Rational(2)});
  EXPECT_EQ(nth_value(v, 1), Rational(3));
  EXPECT_EQ(nth_value(v, 2), Rational(2));
  EXPECT_EQ(nth_value(v, 5), Rational(0));
  EXPECT_THROW(nth_value(v, 0), InputError);
  Instance t = table1_instance(330);
  EXPECT_EQ(nth_value(t.valuations[0], 330), q(40, 107));
  EXPECT_EQ(nth_value(t.valuations[0], 331), q(23, 107));
}

TEST(Normalize, FootnotePartition) {
  Instance f = footnote_instance();
  std::vector<ItemSet> parts{ItemSet(3, {0}), ItemSet(3, {1, 2})};
  Valuation n = normalize_to_partition(f.valuations[0], parts, f.spec);
  EXPECT_EQ(n[0], Rational(1));
  EXPECT_EQ(n[1], q(1, 2));
  EXPECT_EQ(n[2], q(1, 2));
}

TEST(Normalize, UnitPartIsUnchanged) {
  std::vector<ItemSet> whole{ItemSet::full(3)};
  Valuation v({q(1, 2), q(1, 4), q(1, 4)});
  EXPECT_EQ(normalize_to_partition(v, whole, SetSystem::free(3)), v);
}

TEST(Normalize, TableOnePartitionIsAFixedPoint) {
  Instance t = table1_instance(330);
  const std::size_t n = 330, m = t.m();
  std::vector<ItemSet> parts;
  // Type I: A + C + D + 40F for 2n/3 parts, Type II: A + B + E + 40F for n/3.
  ItemId a = 0, b = 330, c = 440, d = 660, e = 880, f = 990;
  for (std::size_t k = 0; k < n; ++k) {
    ItemSet p(m, {a++});
    if (k < 2 * n / 3) {
      p.insert(c++);
      p.insert(d++);
    } else {
      p.insert(b++);
      p.insert(e++);
    }
    for (int x = 0; x < 40; ++x) p.insert(f++);
    parts.push_back(std::move(p));
  }
  EXPECT_EQ(a, 330U);
  EXPECT_EQ(b, 440U);
  EXPECT_EQ(c, 660U);
  EXPECT_EQ(d, 880U);
  EXPECT_EQ(e, 990U);
  EXPECT_EQ(f, m);
  Valuation out = normalize_to_partition(t.valuations[0], parts, t.spec);
  EXPECT_EQ(out, t.valuations[0]);
}

TEST(Normalize, ErrorPaths) {
  Instance f = footnote_instance();
  std::vector<ItemSet> partial{ItemSet(3, {0})};
  EXPECT_THROW(normalize_to_partition(f.valuations[0], partial, f.spec), InputError);
  std::vector<ItemSet> overlap{ItemSet(3, {0, 1}), ItemSet(3, {1, 2})};
  EXPECT_THROW(normalize_to_partition(f.valuations[0], overlap, f.spec), InputError);
  Valuation zero({Rational(0), Rational(1), Rational(1)});
  std::vector<ItemSet> parts{ItemSet(3, {0}), ItemSet(3, {1, 2})};
  EXPECT_THROW(normalize_to_partition(zero, parts, f.spec), DegenerateInputError);
}

class OracleFamilies : public ::testing::TestWithParam<Family> {};

TEST_P(OracleFamilies, MatchesBruteForceExhaustively) {
  for (std::uint64_t seed = 100; seed < 115; ++seed) {
    const std::size_t m = 3 + seed % 8;
    Instance inst = random_instance(seed, m, 1, GetParam());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      ASSERT_EQ(bundle_value(inst.spec, inst.valuations[0], from_mask(m, mask)),
                value_ref(inst.spec, inst.valuations[0], mask));
    }
  }
}

TEST_P(OracleFamilies, MonotoneAndSubadditive) {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const std::size_t m = 4 + seed % 6;
    Instance inst = random_instance(seed, m, 1, GetParam());
    ValuationOracle o(inst.spec, inst.valuations[0]);
    const std::uint64_t full = std::uint64_t{1} << m;
    std::vector<Rational> v(full);
    for (std::uint64_t s = 0; s < full; ++s) v[s] = o.value(from_mask(m, s));
    for (std::uint64_t s = 0; s < full; ++s) {
      for (ItemId j = 0; j < m; ++j) EXPECT_LE(v[s], v[s | std::uint64_t{1} << j]);
      for (std::uint64_t t = 0; t < full; t += 3) EXPECT_LE(v[s | t], v[s] + v[t]);
    }
  }
}

TEST_P(OracleFamilies, ScalingCommutes) {
  const Rational c = q(7, 3);
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const std::size_t m = 5 + seed % 5;
    Instance inst = random_instance(seed, m, 1, GetParam());
    std::vector<Rational> scaled = inst.valuations[0].values();
    for (auto& x : scaled) x *= c;
    Valuation vs(std::move(scaled));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); mask += 5) {
      ItemSet s = from_mask(m, mask);
      EXPECT_EQ(bundle_value(inst.spec, vs, s), c * bundle_value(inst.spec, inst.valuations[0], s));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, OracleFamilies, ::testing::Values(Family::Free, Family::Explicit, Family::Capacity),
                         [](const auto& info) { return std::string(family_name(info.param)); });

}  // namespace
}  // namespace hmms
