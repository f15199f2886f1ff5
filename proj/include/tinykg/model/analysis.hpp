// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "tinykg/error.hpp"
#include "tinykg/model/model_graph.hpp"
#include "tinykg/units.hpp"

namespace tinykg::model {

class AnalysisError : public Error {
 public:
  using Error::Error;
};

struct MacReport {
  std::vector<std::uint64_t> per_layer;
  std::uint64_t total = 0;
};

/// Multiply-accumulate counts for Conv2D, DepthwiseConv2D and
/// FullyConnected; other operators count zero. Batch rows are included.
MacReport count_macs(const ModelGraph& m);

/// Peak bytes of simultaneously live non-constant tensors.
std::uint64_t peak_activation_bytes(const ModelGraph& m);
Kilobytes estimate_ram(const ModelGraph& m);
Kilobytes estimate_flash(std::uint64_t file_size_bytes);

}  // namespace tinykg::model
