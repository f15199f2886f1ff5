// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/model/describe.hpp"

#include <algorithm>

#include "tinykg/model/analysis.hpp"

namespace tinykg::model {

using ontology::LayerDescriptor;
using ontology::MemoryProvenance;
using ontology::ModelDescriptor;

namespace {

std::vector<std::int64_t> shape_of(const ModelGraph& g, const std::vector<std::int32_t>& ids) {
  for (auto id : ids) {
    if (id < 0) continue;
    const auto& s = g.tensors[static_cast<std::size_t>(id)].shape;
    // Scalars are described as a single element.
    if (s.empty()) return {1};
    return {s.begin(), s.end()};
  }
  return {1};
}

}  // namespace

ontology::ModelDescriptor describe(const ModelGraph& g, const ontology::Sidecar& s) {
  ModelDescriptor m;
  m.identifier = s.identifier ? *s.identifier : ontology::generate_uuid();
  m.name = s.name ? *s.name : (g.description.empty() ? "unnamed model" : g.description);
  m.description = s.description.value_or("");
  m.creator = s.creator.value_or("");
  m.citation = s.citation.value_or("");
  m.code_repository = s.code_repository.value_or("");
  m.training_dataset = s.dataset.value_or("");
  m.date_created = s.date_created.value_or("");
  if (s.category) m.category = *s.category;
  m.metrics = s.metrics;
  m.runtime_platform = s.runtime.value_or("TFLite-Micro");
  if (s.sensors) m.sensors = *s.sensors;

  MacReport macs = count_macs(g);
  m.macs = macs.total;
  m.min_ram_kb = s.ram_kb ? *s.ram_kb : estimate_ram(g);
  m.ram_provenance = s.ram_kb ? MemoryProvenance::kMeasured : MemoryProvenance::kEstimated;
  m.min_flash_kb = s.flash_kb ? *s.flash_kb : estimate_flash(g.file_size_bytes);
  m.flash_provenance = s.flash_kb ? MemoryProvenance::kMeasured : MemoryProvenance::kEstimated;

  const std::size_t n = g.operators.size();
  for (std::size_t i = 0; i < n; ++i) {
    const OperatorInfo& o = g.operators[i];
    LayerDescriptor l;
    l.index = static_cast<int>(i);
    l.role = ontology::role_for_position(i, n);
    l.layer_type = o.layer_type;
    l.input_shape = shape_of(g, o.inputs);
    l.output_shape = shape_of(g, o.outputs);
    const TensorInfo& out = g.tensors[static_cast<std::size_t>(o.outputs[0])];
    if (out.quantization) {
      const auto& q = *out.quantization;
      l.quantization = ontology::Quantization{
          static_cast<double>(q.scales[0]), q.zero_points.empty() ? 0 : q.zero_points[0],
          type_name(out.type)};
      if (q.scales.size() > 1) {
        m.notes.push_back("layer " + std::to_string(i) + ": per-channel quantization (" +
                          std::to_string(q.scales.size()) + " scales) reduced to scale[0]");
      }
    }
    m.layers.push_back(std::move(l));
  }
  std::sort(m.notes.begin(), m.notes.end());
  ontology::validate(m);
  return m;
}

}  // namespace tinykg::model
