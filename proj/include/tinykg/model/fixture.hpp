// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tinykg/error.hpp"
#include "tinykg/model/model_graph.hpp"

namespace tinykg::model {

class FixtureError : public Error {
 public:
  using Error::Error;
};

struct OutputQuantization {
  std::vector<float> scales;  // more than one entry means per-channel
  std::int64_t zero_point = 0;
  auto operator<=>(const OutputQuantization&) const = default;
};

/// One operator of a linear chain. Its input is the previous layer's output
/// (or the graph input for the first layer).
struct LayerSpec {
  int opcode = op::kFullyConnected;
  std::vector<std::int32_t> input_shape;
  std::vector<std::int32_t> output_shape;
  std::vector<std::int32_t> weight_shape;  // empty: no weight tensor
  bool bias = false;                       // int32 bias of length output_shape.back()
  TensorType dtype = TensorType::kInt8;    // activations and weights
  std::optional<OutputQuantization> quantization;
  auto operator<=>(const LayerSpec&) const = default;
};

struct FixtureOptions {
  std::string description = "tinykg fixture";
  bool file_identifier = true;
  int extra_subgraphs = 0;
  bool deprecated_opcode_field = false;  // write codes only into the i8 slot
  std::size_t pad_to_bytes = 0;          // append an unused buffer to reach this size
};

/// Serialises a chain into a minimal .tflite flatbuffer.
std::vector<std::uint8_t> build_fixture(const std::vector<LayerSpec>& layers,
                                        const FixtureOptions& options = {});

/// Inverse of build_fixture for graphs it produced.
std::vector<LayerSpec> fixture_spec(const ModelGraph& graph);

LayerSpec fully_connected(std::int32_t in, std::int32_t out, bool bias = false);

}  // namespace tinykg::model
