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

#include <sstream>

#include "hmms/rational.hpp"

namespace hmms {
namespace {

Rational q(std::int64_t a, std::int64_t b) { return Rational(BigInt(a), BigInt(b)); }

TEST(Rational, ParsesReducedFraction) {
  Rational r = Rational::parse("40/107");
  EXPECT_EQ(r.numerator(), 40);
  EXPECT_EQ(r.denominator(), 107);
  EXPECT_EQ(Rational::parse("6/4"), q(3, 2));
  EXPECT_EQ(Rational::parse("6/4").str(), "3/2");
  EXPECT_EQ(Rational::parse("-2/-4").str(), "1/2");
}

TEST(Rational, IntegersPrintWithoutDenominator) {
  EXPECT_EQ(Rational(7).str(), "7");
  EXPECT_EQ(Rational::parse("8/4").str(), "2");
  EXPECT_EQ(Rational::parse("0/5").str(), "0");
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "/", "1/", "/2", "1/0", "a/b", "1.5", "1/2/3", " 1/2"}) {
    EXPECT_THROW(Rational::parse(bad), InputError) << bad;
  }
}

TEST(Rational, ExactArithmeticAndOrder) {
  Rational alpha = q(40, 107) + q(1, 10000000);
  EXPECT_GT(alpha, q(40, 107));
  EXPECT_EQ(q(13, 4) * q(40, 107) - Rational(1), q(23, 107));
  EXPECT_EQ(q(1, 3) + q(1, 6), q(1, 2));
  EXPECT_EQ(q(3, 4) / q(3, 8), Rational(2));
  EXPECT_LT(q(11, 30), q(40, 107));
  EXPECT_EQ((Rational(1) - q(1, 16)) * q(11, 30) * Rational(3), q(33, 32));
}

TEST(Rational, BigValuesStayExact) {
  Rational x(1);
  for (int k = 0; k < 200; ++k) x *= q(15, 16);
  for (int k = 0; k < 200; ++k) x /= q(15, 16);
  EXPECT_EQ(x, Rational(1));
}

TEST(Rational, DecimalRendering) {
  EXPECT_EQ(q(1, 3).decimal(4), "0.3333");
  std::ostringstream os;
  os << q(-5, 10);
  EXPECT_EQ(os.str(), "-1/2");
}

}  // namespace
}  // namespace hmms
