// Copyright 2026 The Somno Authors.
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

#ifndef SOMNO_RATIONAL_H_
#define SOMNO_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace somno {

// Exact non-negative-denominator rational, always stored reduced. Used for
// sampling rates so that sample offsets over long recordings never drift.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Parses a plain decimal such as "30", "0.5", "1.000000" or "-2.25".
  static Rational parse_decimal(std::string_view text);
  // Best approximation with denominator <= max_den (continued fractions).
  static Rational approximate(double value, std::int64_t max_den = 1000000);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / den_; }
  bool is_zero() const { return num_ == 0; }

  // floor(k * this) computed exactly for moderate magnitudes.
  std::int64_t floor_times(std::int64_t k) const;

  std::string to_string() const;

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace somno

#endif  // SOMNO_RATIONAL_H_
