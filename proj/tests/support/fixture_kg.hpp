// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

// The demonstration knowledge graph: six boards and a zoo of 23 models.
// Anchored rows carry the numbers printed for the three discovery queries;
// the remaining entries are distractors chosen to sit just outside each
// query's filters.

#pragma once

#include <string>
#include <vector>

#include "tinykg/ontology/descriptors.hpp"
#include "tinykg/rdf/graph.hpp"

namespace tinykg::testing {

inline constexpr const char* kPersonDetectUuid = "e3a1c7d2-5b64-4f0e-9c21-7d8e6f4a3b10";
inline constexpr const char* kPersonDetectLiteUuid = "10f4b2e8-93c5-4d7a-8e16-2b9c0a5d7e34";
inline constexpr const char* kYesNoUuid = "3e7d9a14-c2b8-4f65-a0d3-91e5b7c48f26";
inline constexpr const char* kMotionUuid = "5a2c8e91-7d34-4b06-bf18-c63a0e9d2f57";

std::vector<ontology::DeviceDescriptor> fixture_devices();
std::vector<ontology::ModelDescriptor> fixture_models();

/// Both lists mapped to triples, with the standard prefixes bound.
rdf::Graph fixture_graph();

const ontology::ModelDescriptor& fixture_model(const std::string& uuid);
const ontology::DeviceDescriptor& fixture_device(const std::string& device_id);

}  // namespace tinykg::testing
