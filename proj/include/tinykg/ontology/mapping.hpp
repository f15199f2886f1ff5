// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tinykg/error.hpp"
#include "tinykg/ontology/descriptors.hpp"
#include "tinykg/rdf/graph.hpp"

namespace tinykg::ontology {

/// A graph node lacks a property required to rebuild its descriptor.
class IncompleteDescriptionError : public Error {
 public:
  IncompleteDescriptionError(std::string node, std::string property);
  const std::string& node() const { return node_; }
  const std::string& property() const { return property_; }

 private:
  std::string node_;
  std::string property_;
};

rdf::Term model_iri(std::string_view identifier);
rdf::Term device_iri(std::string_view device_id);

/// Triples describing `m`, rooted at model_iri(m.identifier). Memory minima
/// hang off s3n:hasProcedureFeature / ssn-system:inCondition nodes, sensors
/// provide input to the model's ssn:hasInput node. Sub-nodes are blank.
/// The fragment carries the standard prefixes. Throws ValidationError.
rdf::Graph model_to_triples(const ModelDescriptor& m);

/// Triples describing `d` as an s3n:SmartSensor with one subsystem per
/// sensor and an s3n:MicroController exposing RAM and Flash capacities.
rdf::Graph device_to_triples(const DeviceDescriptor& d);

/// Inverse of model_to_triples. Throws IncompleteDescriptionError when the
/// identifier, RAM or Flash minimum is missing, ValidationError when the
/// node holds two metrics of the same kind or other malformed values.
ModelDescriptor triples_to_model(const rdf::Graph& g, const rdf::Term& node);
DeviceDescriptor triples_to_device(const rdf::Graph& g, const rdf::Term& node);

/// Nodes typed nnet:NeuralNetwork / s3n:SmartSensor, sorted.
std::vector<rdf::Term> model_nodes(const rdf::Graph& g);
std::vector<rdf::Term> device_nodes(const rdf::Graph& g);

}  // namespace tinykg::ontology
