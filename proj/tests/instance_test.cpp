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

namespace hmms {
namespace {

Rational q(std::int64_t a, std::int64_t b) { return Rational(BigInt(a), BigInt(b)); }

TEST(TableOne, Shape) {
  Instance t = table1_instance(330);
  EXPECT_EQ(t.n(), 330U);
  EXPECT_EQ(t.m(), 43U * 330U);
  EXPECT_TRUE(t.identical_agents());
  ASSERT_TRUE(t.spec.is_capacity());
  const auto& classes = t.spec.as_capacity().classes;
  ASSERT_EQ(classes.size(), 6U);
  const std::vector<std::size_t> sizes{330, 110, 220, 220, 110, 13200};
  const std::vector<std::size_t> caps{2, 1, 2, 5, 11, 40};
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(classes[k].members.size(), sizes[k]);
    EXPECT_EQ(classes[k].capacity, caps[k]);
  }
  ASSERT_EQ(t.item_labels.size(), t.m());
  EXPECT_EQ(t.item_labels.front(), "A");
  EXPECT_EQ(t.item_labels.back(), "F");
}

TEST(TableOne, ValueIdentities) {
  Instance t = table1_instance(660);
  const auto& v = t.valuations[0];
  const Rational a = q(40, 107);
  // First item of each class: A at 0, B at n, C at 4n/3, D at 2n, E at 8n/3, F at 3n.
  const std::size_t n = 660;
  EXPECT_EQ(v[0], a);
  EXPECT_EQ(v[n], q(13, 4) * a - Rational(1));
  EXPECT_EQ(v[n], q(23, 107));
  EXPECT_EQ(v[n + n / 3], q(17, 107));
  EXPECT_EQ(v[2 * n], q(10, 107));
  EXPECT_EQ(v[2 * n + 2 * n / 3], q(4, 107));
  EXPECT_EQ(v[3 * n], q(1, 107));
  EXPECT_EQ(v[t.m() - 1], q(1, 107));
}

TEST(TableOne, RejectsBadAgentCounts) {
  EXPECT_THROW(table1_instance(0), InputError);
  EXPECT_THROW(table1_instance(331), InputError);
  EXPECT_THROW(table1_instance(100), InputError);
}

TEST(Footnote, Shape) {
  Instance f = footnote_instance();
  EXPECT_EQ(f.n(), 1U);
  EXPECT_EQ(f.m(), 3U);
  EXPECT_FALSE(f.spec.is_feasible(ItemSet(3, {0, 1})));
  EXPECT_EQ(bundle_value(f.spec, f.valuations[0], ItemSet(3, {1, 2})), Rational(4));
  EXPECT_EQ(mms_exact(f.spec, f.valuations[0], 2).value, Rational(3));
  Instance two = with_identical_agents(f, 2);
  EXPECT_EQ(two.n(), 2U);
  EXPECT_TRUE(two.identical_agents());
}

TEST(RandomInstance, SameSeedSameInstance) {
  for (Family fam : {Family::Free, Family::Explicit, Family::Capacity}) {
    EXPECT_EQ(random_instance(42, 9, 3, fam), random_instance(42, 9, 3, fam));
    EXPECT_EQ(serialize_instance(random_instance(42, 9, 3, fam)), serialize_instance(random_instance(42, 9, 3, fam)));
  }
  EXPECT_FALSE(random_instance(1, 9, 3, Family::Free) == random_instance(2, 9, 3, Family::Free));
}

TEST(RandomInstance, FreeFamilyIsASingleFullSet) {
  Instance inst = random_instance(5, 7, 2, Family::Free);
  ASSERT_TRUE(inst.spec.is_explicit());
  ASSERT_EQ(inst.spec.as_explicit().maximal_sets.size(), 1U);
  EXPECT_EQ(inst.spec.as_explicit().maximal_sets[0], ItemSet::full(7));
}

TEST(RandomInstance, ValuesRespectTheRange) {
  ValueRange r{2, 5, 3};
  Instance inst = random_instance(9, 10, 3, Family::Capacity, r);
  for (const auto& v : inst.valuations) {
    for (const auto& x : v.values()) {
      EXPECT_GE(x, q(2, 3));
      EXPECT_LE(x, Rational(5));
    }
  }
  EXPECT_THROW(random_instance(1, 0, 1, Family::Free), InputError);
  EXPECT_THROW(random_instance(1, 3, 1, Family::Free, {5, 2, 1}), InputError);
}

TEST(Family, Names) {
  EXPECT_EQ(parse_family("free"), Family::Free);
  EXPECT_EQ(parse_family("explicit"), Family::Explicit);
  EXPECT_EQ(parse_family("explicit-antichain"), Family::Explicit);
  EXPECT_EQ(parse_family("capacity"), Family::Capacity);
  EXPECT_THROW(parse_family("matroid"), InputError);
}

TEST(InstanceIo, RoundTripTableOne) {
  Instance t = table1_instance(330);
  std::string text = serialize_instance(t);
  Instance back = parse_instance(text);
  EXPECT_EQ(back, t);
  EXPECT_EQ(serialize_instance(back), text);
  EXPECT_NE(text.find("\"identical_agents\""), std::string::npos);
}

TEST(InstanceIo, RoundTripRandomFamilies) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = random_instance(seed, 1 + seed % 9, 1 + seed % 4, static_cast<Family>(seed % 3));
    std::string text = serialize_instance(inst);
    Instance back = parse_instance(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(serialize_instance(back), text);
  }
}

TEST(InstanceIo, RationalsAreReduced) {
  const char* doc = R"({"n": 1, "items": [{"id": 0}],
    "set_system": {"type": "explicit", "maximal_sets": [[0]]},
    "valuations": [{"agent": 0, "values": {"0": "80/214"}}]})";
  Instance inst = parse_instance(doc);
  EXPECT_EQ(inst.valuations[0][0], q(40, 107));
  EXPECT_EQ(inst.valuations[0][0].str(), "40/107");
}

TEST(InstanceIo, UnknownVariantIsAParseError) {
  const char* doc = R"({"n": 1, "items": [{"id": 0}],
    "set_system": {"type": "matroid-oracle"},
    "valuations": [{"agent": 0, "values": {"0": "1"}}]})";
  try {
    parse_instance(doc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "set_system.type");
  }
}

TEST(InstanceIo, SyntaxErrorsCarryALine) {
  const char* doc = "{\n \"n\": 1,\n \"items\": [\n  {\"id\": 0},,\n ]\n}";
  try {
    parse_instance(doc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4U);
  }
}

TEST(InstanceIo, SemanticErrorsNameTheField) {
  auto field_of = [](const std::string& doc) -> std::string {
    try {
      parse_instance(doc);
    } catch (const ParseError& e) {
      return e.field();
    }
    return "<none>";
  };
  const std::string ss = R"("set_system": {"type": "explicit", "maximal_sets": [[0]]})";
  EXPECT_EQ(field_of(R"({"n": 0, "items": [{"id": 0}], )" + ss + R"(, "valuations": []})"), "n");
  EXPECT_EQ(field_of(R"({"n": 1, "items": [{"id": 1}], )" + ss + R"(, "valuations": []})"), "items[0].id");
  EXPECT_EQ(field_of(R"({"n": 1, "items": [{"id": 0}], )" + ss +
                     R"(, "valuations": [{"agent": 0, "values": {"0": "x"}}]})"),
            "valuations[0].values.0");
  EXPECT_EQ(field_of(R"({"n": 1, "items": [{"id": 0}], "set_system": {"type": "explicit", "maximal_sets": [[3]]},
                        "valuations": [{"agent": 0, "values": {"0": "1"}}]})"),
            "set_system.maximal_sets[0][0]");
  EXPECT_EQ(field_of(R"({"n": 2, "items": [{"id": 0}], )" + ss +
                     R"(, "valuations": [{"agent": 0, "values": {"0": "1"}}]})"),
            "valuations");
  EXPECT_THROW(parse_instance("[1, 2]"), ParseError);
}

TEST(AllocationIo, RoundTrip) {
  Instance f = with_identical_agents(footnote_instance(), 2);
  FairDivision d = fair_divide(f, q(11, 30), q(1, 16));
  AllocationDocument doc{d.allocation, f.name, "fair_divide", q(11, 30), q(1, 16), d.mu, d.iterations};
  std::string text = serialize_allocation(doc);
  AllocationDocument back = parse_allocation(text);
  EXPECT_EQ(back, doc);
  EXPECT_EQ(serialize_allocation(back), text);
  EXPECT_NE(text.find("\"min_ratio_to_mu\": \"1/2\""), std::string::npos) << text;
}

TEST(AllocationIo, RoundTripTableOne) {
  Instance t = table1_instance(330);
  Allocation a = allocate_from_estimates(t, std::vector<Rational>(t.n(), Rational(1)), q(40, 107) + q(1, 10000000));
  std::string text = serialize_allocation(a);
  EXPECT_EQ(parse_allocation(text).allocation, a);
}

}  // namespace
}  // namespace hmms
