// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "tinykg/ontology/descriptors.hpp"

namespace tinykg::ontology {

/// User-supplied metadata accompanying a model binary. Every field is
/// optional; absent fields fall back to parsed or generated values.
struct Sidecar {
  std::optional<std::string> identifier;
  std::optional<std::string> name;
  std::optional<std::string> description;
  std::optional<std::string> creator;
  std::optional<std::string> citation;
  std::optional<std::string> code_repository;
  std::optional<std::string> dataset;
  std::optional<std::string> date_created;
  std::optional<Category> category;
  std::map<std::string, double> metrics;
  std::optional<std::set<SensorKind>> sensors;
  std::optional<std::string> runtime;
  std::optional<Kilobytes> ram_kb;
  std::optional<Kilobytes> flash_kb;
};

/// Strict parse: unknown fields, wrong types and out-of-range values are all
/// reported together in one ValidationError.
Sidecar parse_sidecar(const nlohmann::json& j);
/// Device manifest: device_id, title, sensors[], ram_kb, flash_kb,
/// endpoints[{protocol, address}].
DeviceDescriptor parse_device_manifest(const nlohmann::json& j);

nlohmann::json to_json(const ModelDescriptor& m);
nlohmann::json to_json(const DeviceDescriptor& d);
/// JSON number for a kb amount: integral values print without a fraction.
nlohmann::json kb_json(Kilobytes kb);

}  // namespace tinykg::ontology
