// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/units.hpp"

#include <array>
#include <charconv>

#include "tinykg/rdf/numeric.hpp"

namespace tinykg {

std::optional<Kilobytes> Kilobytes::parse(std::string_view lexical) {
  auto d = rdf::Decimal::parse(lexical);
  if (!d || d->negative()) return std::nullopt;
  auto tenths = d->ceil_scaled(1);
  if (!tenths) return std::nullopt;
  return from_tenths(*tenths);
}

Kilobytes Kilobytes::from_double(double kb) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), kb);
  if (ec != std::errc{}) return {};
  auto parsed = parse(std::string_view(buf.data(), end - buf.data()));
  return parsed.value_or(Kilobytes{});
}

std::string Kilobytes::to_string() const {
  std::string out = std::to_string(tenths_ / 10);
  if (!is_integral()) {
    out.push_back('.');
    out.push_back(static_cast<char>('0' + tenths_ % 10));
  }
  return out;
}

}  // namespace tinykg
