// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "tinykg/rdf/graph.hpp"

namespace tinykg::ontology {

enum class Severity { kWarning, kError };

struct Finding {
  Severity severity = Severity::kError;
  std::string node;  // N-Triples rendering of the offending node
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool clean() const { return findings.empty(); }
};

/// Report-only checks over a whole knowledge graph: models and devices that
/// cannot be rebuilt into descriptors, memory nodes without a kilobyte unit,
/// sensors feeding nothing, models without layers, duplicate device ids.
ValidationReport validate_kg(const rdf::Graph& g);

}  // namespace tinykg::ontology
