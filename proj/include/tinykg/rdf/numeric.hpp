// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace tinykg::rdf {

/// Exact decimal number parsed from an XSD numeric lexical form.
///
/// The value is `(negative ? -1 : 1) * digits * 10^exponent`, with `digits`
/// stripped of leading and trailing zeros. Zero has empty `digits`. Ordering
/// is exact, so "0.10" == "0.1" and "1e2" == "100".
class Decimal {
 public:
  Decimal() = default;

  /// Accepts `[+-]? (digits ('.' digits?)? | '.' digits) ([eE] [+-]? digits)?`.
  static std::optional<Decimal> parse(std::string_view lexical);

  bool is_zero() const { return digits_.empty(); }
  bool negative() const { return negative_; }

  /// Smallest integer >= value * 10^shift, if it fits in int64.
  std::optional<long long> ceil_scaled(int shift) const;

  std::strong_ordering operator<=>(const Decimal& other) const;
  bool operator==(const Decimal& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
  }

 private:
  bool negative_ = false;
  std::string digits_;
  long exponent_ = 0;
};

}  // namespace tinykg::rdf
