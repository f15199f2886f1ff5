// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/ontology/descriptors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <mutex>
#include <random>

#include "tinykg/rdf/term.hpp"

namespace tinykg::ontology {
namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool valid_iri(const std::string& s) {
  try {
    rdf::Term::iri(s);
    return true;
  } catch (const rdf::StructuralError&) {
    return false;
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> fields)
    : Error("validation failed: " + join(fields)), fields_(std::move(fields)) {}

std::optional<SensorKind> SensorKind::parse(std::string_view name) {
  if (iequals(name, "Accelerometer")) return accelerometer();
  if (iequals(name, "Camera")) return camera();
  if (iequals(name, "Gyroscope")) return gyroscope();
  if (iequals(name, "Microphone")) return microphone();
  if (!is_identifier(name)) return std::nullopt;
  return SensorKind(Type::kOther, std::string(name));
}

std::string SensorKind::name() const {
  switch (type_) {
    case Type::kAccelerometer: return "Accelerometer";
    case Type::kCamera: return "Camera";
    case Type::kGyroscope: return "Gyroscope";
    case Type::kMicrophone: return "Microphone";
    case Type::kOther: break;
  }
  return other_;
}

std::optional<Category> Category::parse(std::string_view name) {
  if (name.starts_with("nnet:")) name.remove_prefix(5);
  if (iequals(name, "Classification")) return classification();
  if (iequals(name, "Regression")) return regression();
  if (!is_identifier(name)) return std::nullopt;
  return Category(Type::kOther, std::string(name));
}

std::string Category::name() const {
  switch (type_) {
    case Type::kClassification: return "Classification";
    case Type::kRegression: return "Regression";
    case Type::kOther: break;
  }
  return other_;
}

std::string_view to_string(LayerRole role) {
  switch (role) {
    case LayerRole::kInput: return "input";
    case LayerRole::kMiddle: return "middle";
    case LayerRole::kOutput: return "output";
  }
  return "middle";
}

std::string_view to_string(MemoryProvenance p) {
  return p == MemoryProvenance::kMeasured ? "measured" : "estimated";
}

std::optional<LayerRole> parse_layer_role(std::string_view s) {
  if (s == "input") return LayerRole::kInput;
  if (s == "middle") return LayerRole::kMiddle;
  if (s == "output") return LayerRole::kOutput;
  return std::nullopt;
}

std::optional<MemoryProvenance> parse_provenance(std::string_view s) {
  if (s == "measured") return MemoryProvenance::kMeasured;
  if (s == "estimated") return MemoryProvenance::kEstimated;
  return std::nullopt;
}

LayerRole role_for_position(std::size_t index, std::size_t count) {
  if (index == 0) return LayerRole::kInput;
  if (index + 1 == count) return LayerRole::kOutput;
  return LayerRole::kMiddle;
}

std::string format_shape(const std::vector<std::int64_t>& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += 'x';
    out += std::to_string(shape[i]);
  }
  return out;
}

std::optional<std::vector<std::int64_t>> parse_shape(std::string_view text) {
  std::vector<std::int64_t> out;
  if (text.empty()) return std::nullopt;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('x', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || p != part.data() + part.size()) {
      return std::nullopt;
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

bool is_accuracy_metric(std::string_view kind) {
  constexpr std::string_view kSuffix = "accuracy";
  if (kind.size() < kSuffix.size()) return false;
  return iequals(kind.substr(kind.size() - kSuffix.size()), kSuffix);
}

std::vector<std::string> violations(const ModelDescriptor& m) {
  std::vector<std::string> out;
  if (!is_uuid(m.identifier)) out.push_back("identifier: not a UUID");
  if (!m.date_created.empty() && !is_iso_date(m.date_created)) {
    out.push_back("date_created: not an ISO-8601 date");
  }
  if (!m.citation.empty() && !valid_iri(m.citation)) {
    out.push_back("citation: not a URL");
  }
  if (!m.code_repository.empty() && !valid_iri(m.code_repository)) {
    out.push_back("code_repository: not a URL");
  }
  if (!m.training_dataset.empty() && !valid_iri(m.training_dataset)) {
    out.push_back("training_dataset: not an IRI");
  }
  for (const auto& [kind, value] : m.metrics) {
    if (!is_identifier(kind)) out.push_back("metric.kind: invalid name '" + kind + "'");
    if (!std::isfinite(value)) {
      out.push_back("metric.value: not finite");
    } else if (is_accuracy_metric(kind) && (value < 0.0 || value > 1.0)) {
      out.push_back("metric.value: " + kind + " outside [0,1]");
    }
  }
  if (m.min_ram_kb.tenths() < 0) out.push_back("min_ram_kb: negative");
  if (m.min_flash_kb.tenths() < 0) out.push_back("min_flash_kb: negative");
  if (m.runtime_platform.find('\n') != std::string::npos) {
    out.push_back("runtime_platform: contains a line break");
  }
  const std::size_t n = m.layers.size();
  for (std::size_t i = 0; i < n; ++i) {
    const LayerDescriptor& l = m.layers[i];
    std::string at = "layers[" + std::to_string(i) + "]";
    if (l.index != static_cast<int>(i)) out.push_back(at + ".index: not contiguous");
    LayerRole expected = role_for_position(i, n);
    bool role_ok = l.role == expected ||
                   (n == 1 && l.role == LayerRole::kOutput);
    if (!role_ok) out.push_back(at + ".role: expected " + std::string(to_string(expected)));
    if (l.layer_type.empty()) out.push_back(at + ".layer_type: empty");
    auto shape_ok = [](const std::vector<std::int64_t>& s) {
      return !s.empty() &&
             std::all_of(s.begin(), s.end(), [](std::int64_t d) { return d >= 0; });
    };
    if (!shape_ok(l.input_shape)) out.push_back(at + ".input_shape: empty or negative");
    if (!shape_ok(l.output_shape)) out.push_back(at + ".output_shape: empty or negative");
    if (l.quantization && !(l.quantization->scale > 0.0 &&
                            std::isfinite(l.quantization->scale))) {
      out.push_back(at + ".quantization.scale: must be positive");
    }
  }
  return out;
}

std::vector<std::string> violations(const DeviceDescriptor& d) {
  std::vector<std::string> out;
  if (!is_device_id(d.device_id)) out.push_back("device_id: invalid");
  if (d.ram_kb.tenths() <= 0) out.push_back("ram_kb: must be positive");
  if (d.flash_kb.tenths() <= 0) out.push_back("flash_kb: must be positive");
  for (const auto& e : d.endpoints) {
    if (e.protocol.empty() || e.address.empty()) {
      out.push_back("endpoints: protocol and address are required");
    }
  }
  return out;
}

void validate(const ModelDescriptor& m) {
  auto v = violations(m);
  if (!v.empty()) throw ValidationError(std::move(v));
}

void validate(const DeviceDescriptor& d) {
  auto v = violations(d);
  if (!v.empty()) throw ValidationError(std::move(v));
}

bool is_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (s[i] != '-') return false;
    } else if (!std::isxdigit(static_cast<unsigned char>(s[i]))) {
      return false;
    }
  }
  return true;
}

std::string generate_uuid() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::uint64_t hi, lo;
  {
    std::lock_guard lock(mu);
    hi = rng();
    lo = rng();
  }
  hi = (hi & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;  // version 4
  lo = (lo & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;  // variant 1
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  auto emit = [&](std::uint64_t v, int nibbles) {
    for (int i = nibbles - 1; i >= 0; --i) out += kHex[(v >> (4 * i)) & 0xF];
  };
  emit(hi >> 32, 8);
  out += '-';
  emit((hi >> 16) & 0xFFFF, 4);
  out += '-';
  emit(hi & 0xFFFF, 4);
  out += '-';
  emit(lo >> 48, 4);
  out += '-';
  emit(lo & 0xFFFFFFFFFFFFULL, 12);
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_device_id(std::string_view s) {
  if (s.empty() || s == "." || s == "..") return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.';
  });
}

bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace tinykg::ontology
