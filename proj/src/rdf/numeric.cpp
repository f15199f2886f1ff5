// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/rdf/numeric.hpp"

#include <algorithm>
#include <cctype>

namespace tinykg::rdf {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr long kMaxExponent = 100000;

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view lexical) {
  std::size_t i = 0;
  bool negative = false;
  if (i < lexical.size() && (lexical[i] == '+' || lexical[i] == '-')) {
    negative = lexical[i] == '-';
    ++i;
  }
  std::string digits;
  std::size_t int_digits = 0;
  while (i < lexical.size() && is_digit(lexical[i])) {
    digits.push_back(lexical[i++]);
    ++int_digits;
  }
  std::size_t frac_digits = 0;
  if (i < lexical.size() && lexical[i] == '.') {
    ++i;
    while (i < lexical.size() && is_digit(lexical[i])) {
      digits.push_back(lexical[i++]);
      ++frac_digits;
    }
  }
  if (int_digits + frac_digits == 0) return std::nullopt;

  long exponent = 0;
  if (i < lexical.size() && (lexical[i] == 'e' || lexical[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < lexical.size() && (lexical[i] == '+' || lexical[i] == '-')) {
      exp_negative = lexical[i] == '-';
      ++i;
    }
    if (i >= lexical.size() || !is_digit(lexical[i])) return std::nullopt;
    while (i < lexical.size() && is_digit(lexical[i])) {
      exponent = exponent * 10 + (lexical[i++] - '0');
      if (exponent > kMaxExponent) return std::nullopt;
    }
    if (exp_negative) exponent = -exponent;
  }
  if (i != lexical.size()) return std::nullopt;

  Decimal d;
  exponent -= static_cast<long>(frac_digits);
  auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return d;  // zero
  digits.erase(0, first);
  auto last = digits.find_last_not_of('0');
  exponent += static_cast<long>(digits.size() - 1 - last);
  digits.erase(last + 1);

  d.negative_ = negative;
  d.digits_ = std::move(digits);
  d.exponent_ = exponent;
  return d;
}

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  auto sign = [](const Decimal& d) {
    return d.is_zero() ? 0 : (d.negative_ ? -1 : 1);
  };
  int sa = sign(*this);
  int sb = sign(other);
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;

  std::strong_ordering magnitude = std::strong_ordering::equal;
  long top_a = static_cast<long>(digits_.size()) + exponent_;
  long top_b = static_cast<long>(other.digits_.size()) + other.exponent_;
  if (top_a != top_b) {
    magnitude = top_a <=> top_b;
  } else {
    std::size_t n = std::max(digits_.size(), other.digits_.size());
    for (std::size_t k = 0; k < n; ++k) {
      char ca = k < digits_.size() ? digits_[k] : '0';
      char cb = k < other.digits_.size() ? other.digits_[k] : '0';
      if (ca != cb) {
        magnitude = ca <=> cb;
        break;
      }
    }
  }
  if (sa < 0) return 0 <=> magnitude;
  return magnitude;
}

std::optional<long long> Decimal::ceil_scaled(int shift) const {
  if (is_zero()) return 0;
  long e = exponent_ + shift;
  long long whole = 0;
  // At most 18 digits are accumulated, so this never overflows.
  auto accumulate = [&whole](char c) { whole = whole * 10 + (c - '0'); };
  bool fractional = false;
  if (e >= 0) {
    if (static_cast<long>(digits_.size()) + e > 18) return std::nullopt;
    for (char c : digits_) accumulate(c);
    for (long k = 0; k < e; ++k) accumulate('0');
  } else {
    long keep = static_cast<long>(digits_.size()) + e;
    if (keep > 18) return std::nullopt;
    for (long k = 0; k < keep; ++k) accumulate(digits_[k]);
    fractional = true;  // trailing digits are never all zero
  }
  if (negative_) return -whole;
  return fractional ? whole + 1 : whole;
}

}  // namespace tinykg::rdf
