// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tinykg/error.hpp"
#include "tinykg/units.hpp"

namespace tinykg::ontology {

/// A descriptor violates its invariants; `fields()` names each offender.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> fields);
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

/// Sensor kind: one of the four known kinds or a custom name. Custom names
/// are plain identifiers so they can be placed in IRIs and query text.
class SensorKind {
 public:
  enum class Type { kAccelerometer, kCamera, kGyroscope, kMicrophone, kOther };

  static SensorKind accelerometer() { return SensorKind(Type::kAccelerometer); }
  static SensorKind camera() { return SensorKind(Type::kCamera); }
  static SensorKind gyroscope() { return SensorKind(Type::kGyroscope); }
  static SensorKind microphone() { return SensorKind(Type::kMicrophone); }
  /// Known names map to their kind; other identifiers become custom kinds.
  static std::optional<SensorKind> parse(std::string_view name);

  Type type() const { return type_; }
  /// Local name inside the sosa_extend namespace, e.g. "Camera".
  std::string name() const;

  auto operator<=>(const SensorKind&) const = default;

 private:
  explicit SensorKind(Type t, std::string other = {})
      : type_(t), other_(std::move(other)) {}
  Type type_ = Type::kOther;
  std::string other_;
};

/// Task category, rendered as an nnet IRI (nnet:Classification, ...).
class Category {
 public:
  enum class Type { kClassification, kRegression, kOther };

  Category() = default;
  static Category classification() { return Category(Type::kClassification); }
  static Category regression() { return Category(Type::kRegression); }
  static std::optional<Category> parse(std::string_view name);

  Type type() const { return type_; }
  std::string name() const;
  auto operator<=>(const Category&) const = default;

 private:
  explicit Category(Type t, std::string other = {})
      : type_(t), other_(std::move(other)) {}
  Type type_ = Type::kClassification;
  std::string other_;
};

enum class LayerRole { kInput, kMiddle, kOutput };
enum class MemoryProvenance { kEstimated, kMeasured };

std::string_view to_string(LayerRole role);
std::string_view to_string(MemoryProvenance p);
std::optional<LayerRole> parse_layer_role(std::string_view s);
std::optional<MemoryProvenance> parse_provenance(std::string_view s);

struct Quantization {
  double scale = 1.0;
  std::int64_t zero_point = 0;
  std::string dtype;  // e.g. "int8"
  auto operator<=>(const Quantization&) const = default;
};

struct LayerDescriptor {
  int index = 0;
  LayerRole role = LayerRole::kMiddle;
  std::string layer_type;
  std::vector<std::int64_t> input_shape;
  std::vector<std::int64_t> output_shape;
  std::optional<Quantization> quantization;
  auto operator<=>(const LayerDescriptor&) const = default;
};

/// Role implied by a layer's position in a model with `count` layers.
LayerRole role_for_position(std::size_t index, std::size_t count);

/// "1x96x96x1" for {1, 96, 96, 1}.
std::string format_shape(const std::vector<std::int64_t>& shape);
std::optional<std::vector<std::int64_t>> parse_shape(std::string_view text);

/// Semantic model card: identity, metadata, structure and hardware needs.
struct ModelDescriptor {
  std::string identifier;  // UUID
  std::string name;
  std::string description;
  std::string creator;
  std::string citation;          // URL, optional
  std::string code_repository;   // URL, optional
  std::string training_dataset;  // IRI or URL, optional
  std::string date_created;      // YYYY-MM-DD, optional
  Category category;
  /// Metric kind (local name in nnet, e.g. "Top_1_accuracy") to value.
  std::map<std::string, double> metrics;
  std::uint64_t macs = 0;
  Kilobytes min_ram_kb;
  Kilobytes min_flash_kb;
  MemoryProvenance ram_provenance = MemoryProvenance::kEstimated;
  MemoryProvenance flash_provenance = MemoryProvenance::kEstimated;
  std::string runtime_platform;
  std::set<SensorKind> sensors;
  std::vector<LayerDescriptor> layers;
  /// Sorted analysis notes, e.g. about reduced per-channel quantization.
  std::vector<std::string> notes;

  bool operator==(const ModelDescriptor&) const = default;
};

struct Endpoint {
  std::string protocol;
  std::string address;
  auto operator<=>(const Endpoint&) const = default;
};

/// Thing-Description-patterned IoT board.
struct DeviceDescriptor {
  std::string device_id;
  std::string title;
  std::set<SensorKind> sensors;
  Kilobytes ram_kb;
  Kilobytes flash_kb;
  std::set<Endpoint> endpoints;

  bool operator==(const DeviceDescriptor&) const = default;
};

/// Names of the constraints a descriptor violates; empty when valid.
std::vector<std::string> violations(const ModelDescriptor& m);
std::vector<std::string> violations(const DeviceDescriptor& d);
/// Throws ValidationError listing every violation.
void validate(const ModelDescriptor& m);
void validate(const DeviceDescriptor& d);

bool is_uuid(std::string_view s);
/// Random version-4 UUID in lowercase canonical form.
std::string generate_uuid();
/// Letters, digits and '_' only, starting with a letter.
bool is_identifier(std::string_view s);
/// Letters, digits, '_', '-' and '.'; usable in IRIs and file names.
bool is_device_id(std::string_view s);
bool is_iso_date(std::string_view s);

/// True for metric kinds bounded to [0, 1] (names ending in "accuracy").
bool is_accuracy_metric(std::string_view kind);

}  // namespace tinykg::ontology
