// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tinykg/model/model_graph.hpp"
#include "tinykg/ontology/descriptors.hpp"
#include "tinykg/ontology/json.hpp"

namespace tinykg::model {

/// Merges what the binary reveals (layers, MACs, memory estimates) with the
/// user-supplied sidecar. Sidecar memory values replace the estimates and are
/// marked as measured. Throws ontology::ValidationError for an invalid result.
ontology::ModelDescriptor describe(const ModelGraph& graph, const ontology::Sidecar& sidecar);

}  // namespace tinykg::model
