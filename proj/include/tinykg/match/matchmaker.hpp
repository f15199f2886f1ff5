// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tinykg/ontology/descriptors.hpp"
#include "tinykg/rdf/graph.hpp"
#include "tinykg/rdf/term.hpp"
#include "tinykg/units.hpp"

namespace tinykg::match {

/// What a model needs from a board.
struct DeviceQuerySpec {
  std::vector<ontology::SensorKind> required_sensors;
  Kilobytes min_ram_kb;
  Kilobytes min_flash_kb;
};

/// What a board offers, plus optional browsing filters.
struct ModelQuerySpec {
  std::vector<ontology::SensorKind> available_sensors;
  std::optional<Kilobytes> max_ram_kb;
  std::optional<Kilobytes> max_flash_kb;
  std::optional<std::string> runtime;
  std::optional<std::string> description_regex;
  std::optional<std::string> dataset_regex;
  bool order_by_metric = true;
};

/// One result: the matched board or model plus the projected columns.
struct MatchRow {
  rdf::Term subject;
  std::vector<std::pair<std::string, rdf::Term>> columns;

  /// Throws std::out_of_range for a name outside the projection.
  const rdf::Term& at(std::string_view name) const;
};

/// Query texts. Each is the corresponding shipped query with the spec's
/// sensors and thresholds substituted; the examples in queries/*.rq come
/// back byte for byte. Throws ValidationError for negative thresholds.
std::string devices_query(const DeviceQuerySpec& spec);
/// One sensor clause per available sensor; without sensors the clause is
/// dropped. Runtime and memory filters are emitted only when set.
std::string models_query(const ModelQuerySpec& spec);
std::string browse_query(const ModelQuerySpec& spec);

/// Boards offering every required sensor and at least the given memory.
std::vector<MatchRow> devices_for_model(const rdf::Graph& kg,
                                        const DeviceQuerySpec& spec);
/// Models whose sensors are a subset of `available_sensors` and whose
/// memory needs fit under the ceilings.
std::vector<MatchRow> models_for_device(const rdf::Graph& kg,
                                        const ModelQuerySpec& spec);
/// Models fed by every listed sensor that pass the description and dataset
/// filters (case-insensitive), ordered by top-1 accuracy when requested.
/// Throws sparql::InvalidRegexError for a pattern that does not compile.
std::vector<MatchRow> browse_models(const rdf::Graph& kg,
                                    const ModelQuerySpec& spec);

DeviceQuerySpec requirements(const ontology::ModelDescriptor& m);
ModelQuerySpec capabilities(const ontology::DeviceDescriptor& d);

/// The compatibility predicate evaluated directly on descriptors.
bool compatible(const ontology::ModelDescriptor& m,
                const ontology::DeviceDescriptor& d);

}  // namespace tinykg::match
