// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tinykg/model/flatbuffer.hpp"

namespace tinykg::model {

/// Tensor element types, numbered as in the TFLite schema.
enum class TensorType : std::int8_t {
  kFloat32 = 0,
  kFloat16 = 1,
  kInt32 = 2,
  kUInt8 = 3,
  kInt64 = 4,
  kString = 5,
  kBool = 6,
  kInt16 = 7,
  kComplex64 = 8,
  kInt8 = 9,
  kFloat64 = 10,
  kComplex128 = 11,
  kUInt64 = 12,
  kResource = 13,
  kVariant = 14,
  kUInt32 = 15,
  kUInt16 = 16,
  kInt4 = 17,
};

/// Width in bits; strings count one byte per element as a lower bound.
int type_bits(TensorType t);
std::string type_name(TensorType t);

/// Builtin operator codes with dedicated handling.
namespace op {
inline constexpr int kAveragePool2D = 1;
inline constexpr int kConv2D = 3;
inline constexpr int kDepthwiseConv2D = 4;
inline constexpr int kDequantize = 6;
inline constexpr int kFullyConnected = 9;
inline constexpr int kMaxPool2D = 17;
inline constexpr int kReshape = 22;
inline constexpr int kSoftmax = 25;
inline constexpr int kQuantize = 114;
}  // namespace op

/// "FullyConnected" for 9, "Other(<code>)" for unmapped codes.
std::string layer_type_name(int builtin_code);
bool has_layer_name(int builtin_code);

struct TensorQuantization {
  std::vector<float> scales;
  std::vector<std::int64_t> zero_points;
  bool operator==(const TensorQuantization&) const = default;
};

struct TensorInfo {
  std::string name;
  std::vector<std::int32_t> shape;
  TensorType type = TensorType::kFloat32;
  std::uint32_t buffer_index = 0;
  bool is_constant = false;
  std::optional<TensorQuantization> quantization;

  std::uint64_t element_count() const;
  std::uint64_t byte_size() const;
  bool operator==(const TensorInfo&) const = default;
};

struct OperatorInfo {
  int opcode = 0;  // builtin code
  std::string layer_type;
  std::vector<std::int32_t> inputs;  // -1 marks an omitted optional input
  std::vector<std::int32_t> outputs;
  bool operator==(const OperatorInfo&) const = default;
};

struct OperatorCode {
  int builtin_code = 0;
  int version = 1;
  bool operator==(const OperatorCode&) const = default;
};

struct ModelGraph {
  std::uint32_t version = 0;
  std::string description;
  std::string subgraph_name;
  std::vector<TensorInfo> tensors;
  std::vector<OperatorInfo> operators;
  std::vector<std::int32_t> graph_inputs;
  std::vector<std::int32_t> graph_outputs;
  std::vector<OperatorCode> opcodes;
  std::uint64_t file_size_bytes = 0;
  std::vector<std::string> warnings;
};

/// Decodes a .tflite buffer; only subgraph 0 is read.
ModelGraph read_model(std::span<const std::uint8_t> bytes);
ModelGraph read_model_file(const std::string& path);

}  // namespace tinykg::model
