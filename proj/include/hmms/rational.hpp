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

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "hmms/errors.hpp"

namespace hmms {

using BigInt = boost::multiprecision::cpp_int;

/// Exact fraction with arbitrary-precision numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator, so equality is
/// structural and the textual form "num/den" is canonical.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : q_(value) {}  // NOLINT: implicit by design of literals
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw InputError("rational with zero denominator");
    q_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den) : boost::multiprecision::cpp_rational(num, den);
  }

  /// Parses "num/den", "num" or "-num/den". Whitespace is not accepted.
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> BigInt {
      std::size_t i = 0;
      if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i == s.size()) throw InputError("malformed rational '" + std::string(text) + "'");
      for (std::size_t k = i; k < s.size(); ++k) {
        if (s[k] < '0' || s[k] > '9') throw InputError("malformed rational '" + std::string(text) + "'");
      }
      return BigInt(std::string(s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text), BigInt(1));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InputError("rational with zero denominator '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }

  BigInt numerator() const { return boost::multiprecision::numerator(q_); }
  BigInt denominator() const { return boost::multiprecision::denominator(q_); }

  bool is_zero() const { return q_ == 0; }
  int sign() const { return q_.sign(); }

  /// Canonical text: "num/den", or just "num" when the value is an integer.
  std::string str() const {
    BigInt den = denominator();
    if (den == 1) return numerator().str();
    return numerator().str() + "/" + den.str();
  }

  double to_double() const { return q_.convert_to<double>(); }

  /// Approximate decimal rendering; display only.
  std::string decimal(int digits = 6) const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << to_double();
    return out.str();
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw InputError("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.q_ = -a.q_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.q_ < b.q_) return std::strong_ordering::less;
    if (a.q_ > b.q_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  boost::multiprecision::cpp_rational q_;
};

}  // namespace hmms
