// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

// Bounds-checked view over a FlatBuffers byte buffer. Every offset is
// validated before it is followed; failures carry the offending position.

#pragma once

#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tinykg/error.hpp"

namespace tinykg::model {

class MalformedFileError : public Error {
 public:
  MalformedFileError(std::size_t position, const std::string& what)
      : Error("malformed-file at byte " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace fb {

class Bytes {
 public:
  explicit Bytes(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t size() const { return data_.size(); }

  void require(std::size_t pos, std::uint64_t len, const char* what) const {
    if (pos > data_.size() || len > data_.size() - pos) {
      throw MalformedFileError(pos, std::string("truncated ") + what);
    }
  }

  template <typename T>
  T read(std::size_t pos, const char* what) const {
    require(pos, sizeof(T), what);
    T v;
    std::memcpy(&v, data_.data() + pos, sizeof(T));
    return v;  // host is little-endian, like the wire format
  }

  /// Target of the unsigned forward offset stored at `pos`.
  std::size_t follow(std::size_t pos, const char* what) const {
    std::uint32_t off = read<std::uint32_t>(pos, what);
    std::uint64_t target = static_cast<std::uint64_t>(pos) + off;
    if (off == 0 || target >= data_.size()) {
      throw MalformedFileError(pos, std::string("offset out of range for ") + what);
    }
    return static_cast<std::size_t>(target);
  }

  const std::uint8_t* at(std::size_t pos) const { return data_.data() + pos; }

 private:
  std::span<const std::uint8_t> data_;
};

class Table;

/// A vector: u32 element count followed by the elements.
class Vector {
 public:
  Vector(const Bytes& bytes, std::size_t pos, std::size_t elem_size, const char* what)
      : bytes_(&bytes), what_(what) {
    std::uint32_t n = bytes.read<std::uint32_t>(pos, what);
    bytes.require(pos + 4, static_cast<std::uint64_t>(n) * elem_size, what);
    begin_ = pos + 4;
    size_ = n;
  }

  std::size_t size() const { return size_; }

  template <typename T>
  T scalar(std::size_t i) const {
    return bytes_->read<T>(begin_ + i * sizeof(T), what_);
  }
  inline Table table(std::size_t i) const;
  std::string_view string(std::size_t i) const;

  std::span<const std::uint8_t> raw() const { return {bytes_->at(begin_), size_}; }

 private:
  const Bytes* bytes_;
  const char* what_;
  std::size_t begin_ = 0;
  std::size_t size_ = 0;
};

inline std::string_view read_string(const Bytes& bytes, std::size_t pos, const char* what) {
  Vector v(bytes, pos, 1, what);
  auto raw = v.raw();
  return {reinterpret_cast<const char*>(raw.data()), raw.size()};
}

inline std::string_view Vector::string(std::size_t i) const {
  return read_string(*bytes_, bytes_->follow(begin_ + i * 4, what_), what_);
}

/// A table located through its signed vtable offset.
class Table {
 public:
  Table(const Bytes& bytes, std::size_t pos, const char* what) : bytes_(&bytes), pos_(pos) {
    std::int32_t soff = bytes.read<std::int32_t>(pos, what);
    std::int64_t vt = static_cast<std::int64_t>(pos) - soff;
    if (vt < 0 || static_cast<std::uint64_t>(vt) >= bytes.size()) {
      throw MalformedFileError(pos, std::string("vtable out of range for ") + what);
    }
    vtable_ = static_cast<std::size_t>(vt);
    vtable_size_ = bytes.read<std::uint16_t>(vtable_, what);
    table_size_ = bytes.read<std::uint16_t>(vtable_ + 2, what);
    if (vtable_size_ < 4 || vtable_size_ % 2 != 0) {
      throw MalformedFileError(vtable_, std::string("bad vtable size for ") + what);
    }
    bytes.require(vtable_, vtable_size_, what);
    bytes.require(pos, table_size_, what);
  }

  /// Byte position of field `id`, or nullopt when the slot is absent.
  std::optional<std::size_t> field(int id, std::size_t width, const char* what) const {
    std::size_t slot = 4 + 2 * static_cast<std::size_t>(id);
    if (slot + 2 > vtable_size_) return std::nullopt;
    std::uint16_t off = bytes_->read<std::uint16_t>(vtable_ + slot, what);
    if (off == 0) return std::nullopt;
    if (off < 4 || off + width > table_size_) {
      throw MalformedFileError(vtable_ + slot, std::string("field outside table for ") + what);
    }
    return pos_ + off;
  }

  template <typename T>
  T scalar(int id, T fallback, const char* what) const {
    auto p = field(id, sizeof(T), what);
    return p ? bytes_->read<T>(*p, what) : fallback;
  }
  bool has(int id) const { return field(id, 0, "field").has_value(); }

  std::optional<Table> table(int id, const char* what) const {
    auto p = field(id, 4, what);
    if (!p) return std::nullopt;
    return Table(*bytes_, bytes_->follow(*p, what), what);
  }
  std::optional<Vector> vector(int id, std::size_t elem_size, const char* what) const {
    auto p = field(id, 4, what);
    if (!p) return std::nullopt;
    return Vector(*bytes_, bytes_->follow(*p, what), elem_size, what);
  }
  std::optional<std::string_view> string(int id, const char* what) const {
    auto p = field(id, 4, what);
    if (!p) return std::nullopt;
    return read_string(*bytes_, bytes_->follow(*p, what), what);
  }

  std::size_t position() const { return pos_; }

 private:
  const Bytes* bytes_;
  std::size_t pos_;
  std::size_t vtable_ = 0;
  std::uint16_t vtable_size_ = 0;
  std::uint16_t table_size_ = 0;
};

inline Table Vector::table(std::size_t i) const {
  return Table(*bytes_, bytes_->follow(begin_ + i * 4, what_), what_);
}

inline Table root(const Bytes& bytes) {
  if (bytes.size() < 8) throw MalformedFileError(bytes.size(), "file shorter than 8 bytes");
  return Table(bytes, bytes.follow(0, "root table"), "root table");
}

}  // namespace fb
}  // namespace tinykg::model
