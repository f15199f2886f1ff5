// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/model/analysis.hpp"

#include <algorithm>
#include <string>

namespace tinykg::model {
namespace {

const TensorInfo& tensor(const ModelGraph& m, const OperatorInfo& o, std::size_t slot,
                         bool output) {
  const auto& list = output ? o.outputs : o.inputs;
  if (slot >= list.size() || list[slot] < 0) {
    throw AnalysisError(o.layer_type + ": missing " + (output ? "output" : "input") +
                        " tensor " + std::to_string(slot));
  }
  return m.tensors.at(static_cast<std::size_t>(list[slot]));
}

void require(bool ok, const OperatorInfo& o, const std::string& what) {
  if (!ok) throw AnalysisError(o.layer_type + ": " + what);
}

std::uint64_t u(std::int32_t d) { return static_cast<std::uint64_t>(d); }

std::uint64_t conv_macs(const ModelGraph& m, const OperatorInfo& o, bool depthwise) {
  const TensorInfo& in = tensor(m, o, 0, false);
  const TensorInfo& w = tensor(m, o, 1, false);
  const TensorInfo& out = tensor(m, o, 0, true);
  require(in.shape.size() == 4 && w.shape.size() == 4 && out.shape.size() == 4, o,
          "expected rank-4 input, weights and output");
  const auto& ws = w.shape;
  const auto& os = out.shape;
  if (depthwise) {
    // weights [1, Kh, Kw, Cout]; Cout is a multiple of Cin.
    require(ws[0] == 1 && ws[3] == os[3], o, "weights inconsistent with output channels");
    require(in.shape[3] > 0 && os[3] % in.shape[3] == 0, o,
            "output channels not a multiple of input channels");
    return u(os[0]) * u(os[1]) * u(os[2]) * u(os[3]) * u(ws[1]) * u(ws[2]);
  }
  // weights [Cout, Kh, Kw, Cin]
  require(ws[0] == os[3], o, "weights inconsistent with output channels");
  require(ws[3] == in.shape[3], o, "weights inconsistent with input channels");
  return u(os[0]) * u(os[1]) * u(os[2]) * u(os[3]) * u(ws[1]) * u(ws[2]) * u(ws[3]);
}

std::uint64_t fc_macs(const ModelGraph& m, const OperatorInfo& o) {
  const TensorInfo& in = tensor(m, o, 0, false);
  const TensorInfo& w = tensor(m, o, 1, false);
  const TensorInfo& out = tensor(m, o, 0, true);
  require(w.shape.size() == 2, o, "expected weights [out, in]");
  std::uint64_t out_features = u(w.shape[0]);
  std::uint64_t in_features = u(w.shape[1]);
  require(in_features > 0 && in.element_count() % in_features == 0, o,
          "input size not a multiple of the weight input dimension");
  require(!out.shape.empty() && u(out.shape.back()) == out_features, o,
          "weights inconsistent with output features");
  std::uint64_t rows = in.element_count() / in_features;
  return rows * out_features * in_features;
}

}  // namespace

MacReport count_macs(const ModelGraph& m) {
  MacReport r;
  for (const auto& o : m.operators) {
    std::uint64_t macs = 0;
    switch (o.opcode) {
      case op::kConv2D: macs = conv_macs(m, o, false); break;
      case op::kDepthwiseConv2D: macs = conv_macs(m, o, true); break;
      case op::kFullyConnected: macs = fc_macs(m, o); break;
      default: break;
    }
    r.per_layer.push_back(macs);
    r.total += macs;
  }
  return r;
}

std::uint64_t peak_activation_bytes(const ModelGraph& m) {
  const std::size_t steps = std::max<std::size_t>(1, m.operators.size());
  const std::size_t n = m.tensors.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> first(n, kUnset), last(n, 0);
  std::vector<bool> relevant(n, false);

  auto touch = [&](std::int32_t idx, std::size_t step) {
    if (idx < 0) return;
    auto i = static_cast<std::size_t>(idx);
    if (m.tensors[i].is_constant) return;
    relevant[i] = true;
    first[i] = std::min(first[i], step);
    last[i] = std::max(last[i], step);
  };
  for (auto idx : m.graph_inputs) touch(idx, 0);
  for (auto idx : m.graph_outputs) touch(idx, steps - 1);
  for (std::size_t s = 0; s < m.operators.size(); ++s) {
    for (auto idx : m.operators[s].inputs) touch(idx, s);
    for (auto idx : m.operators[s].outputs) touch(idx, s);
  }

  std::uint64_t peak = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::uint64_t live = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (relevant[i] && first[i] <= s && s <= last[i]) live += m.tensors[i].byte_size();
    }
    peak = std::max(peak, live);
  }
  return peak;
}

Kilobytes estimate_ram(const ModelGraph& m) {
  return Kilobytes::from_bytes(peak_activation_bytes(m));
}

Kilobytes estimate_flash(std::uint64_t file_size_bytes) {
  return Kilobytes::from_bytes(file_size_bytes);
}

}  // namespace tinykg::model
