// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tinykg {

/// Memory amount in kibibytes (1 kb = 1024 bytes), held at a resolution of
/// one tenth of a kb. Values that need finer resolution are rounded up.
class Kilobytes {
 public:
  constexpr Kilobytes() = default;

  static constexpr Kilobytes from_tenths(std::int64_t tenths) {
    Kilobytes k;
    k.tenths_ = tenths;
    return k;
  }
  static constexpr Kilobytes whole(std::int64_t kb) {
    return from_tenths(kb * 10);
  }
  /// Rounds up to the next tenth of a kb.
  static constexpr Kilobytes from_bytes(std::uint64_t bytes) {
    return from_tenths(
        static_cast<std::int64_t>((bytes * 10 + 1023) / 1024));
  }
  /// Parses a decimal lexical form ("116", "8.8", "0.25", "1e2").
  /// Extra fractional precision rounds up; negative values are rejected.
  static std::optional<Kilobytes> parse(std::string_view lexical);
  static Kilobytes from_double(double kb);

  constexpr std::int64_t tenths() const { return tenths_; }
  constexpr bool is_integral() const { return tenths_ % 10 == 0; }
  /// Bytes covered by this amount (floor).
  constexpr std::uint64_t bytes() const {
    return static_cast<std::uint64_t>(tenths_) * 1024 / 10;
  }
  double as_double() const { return static_cast<double>(tenths_) / 10.0; }

  /// "116" for integral values, "8.8" otherwise.
  std::string to_string() const;

  constexpr auto operator<=>(const Kilobytes&) const = default;

 private:
  std::int64_t tenths_ = 0;
};

}  // namespace tinykg
