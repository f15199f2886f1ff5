// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/ontology/json.hpp"

#include "tinykg/ontology/mapping.hpp"

namespace tinykg::ontology {

using nlohmann::json;

namespace {

class FieldReader {
 public:
  explicit FieldReader(std::vector<std::string>& problems) : problems_(problems) {}

  std::optional<std::string> text(const json& v, const std::string& key) {
    if (!v.is_string()) {
      problems_.push_back(key + ": expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<Kilobytes> kb(const json& v, const std::string& key) {
    if (!v.is_number()) {
      problems_.push_back(key + ": expected a number");
      return std::nullopt;
    }
    double d = v.get<double>();
    if (!(d >= 0.0) || d > 1e15) {
      problems_.push_back(key + ": must be a non-negative kb amount");
      return std::nullopt;
    }
    return Kilobytes::from_double(d);
  }

  std::optional<std::set<SensorKind>> sensors(const json& v, const std::string& key) {
    if (!v.is_array()) {
      problems_.push_back(key + ": expected an array of sensor names");
      return std::nullopt;
    }
    std::set<SensorKind> out;
    for (const auto& item : v) {
      std::optional<SensorKind> k;
      if (item.is_string()) k = SensorKind::parse(item.get<std::string>());
      if (!k) {
        problems_.push_back(key + ": invalid sensor " + item.dump());
        continue;
      }
      out.insert(*k);
    }
    return out;
  }

 private:
  std::vector<std::string>& problems_;
};

void read_metric(const json& v, std::map<std::string, double>& out,
                 std::vector<std::string>& problems) {
  if (!v.is_object()) {
    problems.push_back("metric: expected an object {kind, value}");
    return;
  }
  std::string kind = "Top_1_accuracy";
  std::optional<double> value;
  for (const auto& [key, item] : v.items()) {
    if (key == "kind") {
      if (!item.is_string() || !is_identifier(item.get<std::string>())) {
        problems.push_back("metric.kind: expected an identifier");
      } else {
        kind = item.get<std::string>();
      }
    } else if (key == "value") {
      if (!item.is_number()) {
        problems.push_back("metric.value: expected a number");
      } else {
        value = item.get<double>();
      }
    } else {
      problems.push_back("metric." + key + ": unknown field");
    }
  }
  if (!value) {
    problems.push_back("metric.value: required");
    return;
  }
  if (is_accuracy_metric(kind) && (*value < 0.0 || *value > 1.0)) {
    problems.push_back("metric.value: " + kind + " outside [0,1]");
    return;
  }
  if (!out.emplace(kind, *value).second) {
    problems.push_back("metric: more than one " + kind);
  }
}

}  // namespace

Sidecar parse_sidecar(const json& j) {
  std::vector<std::string> problems;
  Sidecar s;
  if (!j.is_object()) throw ValidationError({"sidecar: expected a JSON object"});
  FieldReader r(problems);
  for (const auto& [key, v] : j.items()) {
    if (key == "identifier") {
      s.identifier = r.text(v, key);
      if (s.identifier && !is_uuid(*s.identifier)) {
        problems.push_back("identifier: not a UUID");
      }
    } else if (key == "name") {
      s.name = r.text(v, key);
    } else if (key == "description") {
      s.description = r.text(v, key);
    } else if (key == "creator") {
      s.creator = r.text(v, key);
    } else if (key == "citation") {
      s.citation = r.text(v, key);
    } else if (key == "code_repository") {
      s.code_repository = r.text(v, key);
    } else if (key == "dataset") {
      s.dataset = r.text(v, key);
    } else if (key == "date_created") {
      s.date_created = r.text(v, key);
      if (s.date_created && !is_iso_date(*s.date_created)) {
        problems.push_back("date_created: not an ISO-8601 date");
      }
    } else if (key == "category") {
      if (auto t = r.text(v, key)) {
        s.category = Category::parse(*t);
        if (!s.category) problems.push_back("category: invalid name");
      }
    } else if (key == "metric") {
      if (v.is_array()) {
        for (const auto& item : v) read_metric(item, s.metrics, problems);
      } else {
        read_metric(v, s.metrics, problems);
      }
    } else if (key == "sensors") {
      s.sensors = r.sensors(v, key);
    } else if (key == "runtime") {
      s.runtime = r.text(v, key);
    } else if (key == "ram_kb") {
      s.ram_kb = r.kb(v, key);
    } else if (key == "flash_kb") {
      s.flash_kb = r.kb(v, key);
    } else {
      problems.push_back(key + ": unknown field");
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return s;
}

DeviceDescriptor parse_device_manifest(const json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) throw ValidationError({"manifest: expected a JSON object"});
  FieldReader r(problems);
  DeviceDescriptor d;
  bool has_id = false, has_ram = false, has_flash = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "device_id") {
      if (auto t = r.text(v, key)) {
        d.device_id = *t;
        has_id = true;
      }
    } else if (key == "title") {
      if (auto t = r.text(v, key)) d.title = *t;
    } else if (key == "sensors") {
      if (auto s = r.sensors(v, key)) d.sensors = *s;
    } else if (key == "ram_kb") {
      if (auto kb = r.kb(v, key)) {
        d.ram_kb = *kb;
        has_ram = true;
      }
    } else if (key == "flash_kb") {
      if (auto kb = r.kb(v, key)) {
        d.flash_kb = *kb;
        has_flash = true;
      }
    } else if (key == "endpoints") {
      if (!v.is_array()) {
        problems.push_back("endpoints: expected an array");
        continue;
      }
      for (const auto& e : v) {
        if (!e.is_object() || !e.contains("protocol") || !e.contains("address") ||
            !e["protocol"].is_string() || !e["address"].is_string()) {
          problems.push_back("endpoints: each needs string protocol and address");
          continue;
        }
        d.endpoints.insert(Endpoint{e["protocol"].get<std::string>(),
                                    e["address"].get<std::string>()});
      }
    } else {
      problems.push_back(key + ": unknown field");
    }
  }
  if (!has_id) problems.push_back("device_id: required");
  if (!has_ram) problems.push_back("ram_kb: required");
  if (!has_flash) problems.push_back("flash_kb: required");
  if (problems.empty()) {
    auto v = violations(d);
    problems.insert(problems.end(), v.begin(), v.end());
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return d;
}

json kb_json(Kilobytes kb) {
  if (kb.is_integral()) return kb.tenths() / 10;
  return kb.as_double();
}

json to_json(const ModelDescriptor& m) {
  json sensors = json::array();
  for (const auto& s : m.sensors) sensors.push_back(s.name());
  json metrics = json::array();
  for (const auto& [kind, value] : m.metrics) {
    metrics.push_back({{"kind", kind}, {"value", value}});
  }
  json layers = json::array();
  for (const auto& l : m.layers) {
    json layer = {{"index", l.index},
                  {"role", std::string(to_string(l.role))},
                  {"layer_type", l.layer_type},
                  {"input_shape", l.input_shape},
                  {"output_shape", l.output_shape}};
    if (l.quantization) {
      layer["quantization"] = {{"scale", l.quantization->scale},
                               {"zero_point", l.quantization->zero_point},
                               {"dtype", l.quantization->dtype}};
    }
    layers.push_back(std::move(layer));
  }
  return {
      {"iri", model_iri(m.identifier).value()},
      {"identifier", m.identifier},
      {"name", m.name},
      {"description", m.description},
      {"creator", m.creator},
      {"citation", m.citation},
      {"code_repository", m.code_repository},
      {"training_dataset", m.training_dataset},
      {"date_created", m.date_created},
      {"category", m.category.name()},
      {"metrics", metrics},
      {"macs", m.macs},
      {"min_ram_kb", kb_json(m.min_ram_kb)},
      {"min_flash_kb", kb_json(m.min_flash_kb)},
      {"ram_provenance", std::string(to_string(m.ram_provenance))},
      {"flash_provenance", std::string(to_string(m.flash_provenance))},
      {"runtime_platform", m.runtime_platform},
      {"sensors", sensors},
      {"layers", layers},
      {"notes", m.notes},
  };
}

json to_json(const DeviceDescriptor& d) {
  json sensors = json::array();
  for (const auto& s : d.sensors) sensors.push_back(s.name());
  json endpoints = json::array();
  for (const auto& e : d.endpoints) {
    endpoints.push_back({{"protocol", e.protocol}, {"address", e.address}});
  }
  return {
      {"iri", device_iri(d.device_id).value()},
      {"device_id", d.device_id},
      {"title", d.title},
      {"sensors", sensors},
      {"ram_kb", kb_json(d.ram_kb)},
      {"flash_kb", kb_json(d.flash_kb)},
      {"endpoints", endpoints},
  };
}

}  // namespace tinykg::ontology
