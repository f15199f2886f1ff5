// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/ontology/mapping.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>

#include "tinykg/ontology/vocabulary.hpp"

namespace tinykg::ontology {

using rdf::Graph;
using rdf::Term;

IncompleteDescriptionError::IncompleteDescriptionError(std::string node,
                                                       std::string property)
    : Error("incomplete description of " + node + ": missing " + property),
      node_(std::move(node)),
      property_(std::move(property)) {}

Term model_iri(std::string_view identifier) {
  return Term::iri(vocab::kModelBase + std::string(identifier));
}

Term device_iri(std::string_view device_id) {
  return Term::iri(vocab::kDeviceBase + std::string(device_id));
}

namespace {

Term kb_literal(Kilobytes kb) {
  if (kb.is_integral()) return Term::integer(kb.tenths() / 10);
  return Term::decimal(kb.to_string());
}

// Shortest fixed-notation lexical form that round-trips, always with a '.'.
Term decimal_literal(double v) {
  std::array<char, 400> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed);
  std::string lex(buf.data(), ec == std::errc{} ? end : buf.data());
  if (lex.find('.') == std::string::npos) lex += ".0";
  return Term::decimal(lex);
}

Term double_literal(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return Term::literal(std::string(buf.data(), end), rdf::xsd::kDouble);
}

Term string_literal(const std::string& s) { return Term::literal(s); }

Term nnet_term(const std::string& local) { return Term::iri(vocab::kNnet + local); }

Term sensor_class(const SensorKind& k) {
  return Term::iri(vocab::kSosaExtend + k.name());
}

Graph with_prefixes() {
  Graph g;
  for (auto& [name, ns] : vocab::standard_prefixes()) g.bind_prefix(name, ns);
  return g;
}

void emit_memory(Graph& g, const Term& nn, const Term& type, Kilobytes kb,
                 MemoryProvenance provenance) {
  Term feature = g.fresh_blank();
  Term cond = g.fresh_blank();
  g.insert(nn, vocab::kHasProcedureFeature, feature);
  g.insert(feature, vocab::kInCondition, cond);
  g.insert(cond, vocab::kType, type);
  g.insert(cond, vocab::kMinValue, kb_literal(kb));
  g.insert(cond, vocab::kUnitCode, vocab::kKilobyte);
  g.insert(cond, vocab::kHasProvenance,
           string_literal(std::string(to_string(provenance))));
}

Term role_class(LayerRole role) {
  switch (role) {
    case LayerRole::kInput: return vocab::kInputLayer;
    case LayerRole::kOutput: return vocab::kOutputLayer;
    case LayerRole::kMiddle: break;
  }
  return vocab::kMiddleLayer;
}

// ---- reading helpers ----

std::string local_in(const Term& t, const std::string& ns) {
  if (!t.is_iri() || !t.value().starts_with(ns)) return {};
  return t.value().substr(ns.size());
}

bool has_type(const Graph& g, const Term& node, const Term& type) {
  return g.contains(rdf::Triple{node, vocab::kType, type});
}

std::string text_of(const Graph& g, const Term& s, const Term& p) {
  auto o = g.object_of(s, p);
  if (!o || o->is_blank()) return {};
  return o->value();
}

std::optional<Kilobytes> kb_of(const Graph& g, const Term& s, const Term& p) {
  for (const Term& o : g.objects_of(s, p)) {
    if (!o.is_numeric()) continue;
    if (auto kb = Kilobytes::parse(o.value())) return kb;
  }
  return std::nullopt;
}

std::optional<std::int64_t> integer_of(const Graph& g, const Term& s,
                                       const Term& p) {
  for (const Term& o : g.objects_of(s, p)) {
    auto d = o.numeric_value();
    if (!d) continue;
    if (auto v = d->ceil_scaled(0)) return *v;
  }
  return std::nullopt;
}

std::optional<double> double_of(const Graph& g, const Term& s, const Term& p) {
  for (const Term& o : g.objects_of(s, p)) {
    if (!o.is_numeric()) continue;
    return std::strtod(o.value().c_str(), nullptr);
  }
  return std::nullopt;
}

struct MemoryReading {
  std::optional<Kilobytes> kb;
  MemoryProvenance provenance = MemoryProvenance::kEstimated;
};

MemoryReading read_condition(const Graph& g, const Term& nn, const Term& type) {
  MemoryReading r;
  for (const Term& feature : g.objects_of(nn, vocab::kHasProcedureFeature)) {
    for (const Term& cond : g.objects_of(feature, vocab::kInCondition)) {
      if (!has_type(g, cond, type)) continue;
      r.kb = kb_of(g, cond, vocab::kMinValue);
      if (auto p = parse_provenance(text_of(g, cond, vocab::kHasProvenance))) {
        r.provenance = *p;
      }
      if (r.kb) return r;
    }
  }
  return r;
}

std::set<SensorKind> sensor_types(const Graph& g, const Term& node) {
  std::set<SensorKind> out;
  for (const Term& t : g.objects_of(node, vocab::kType)) {
    std::string local = local_in(t, vocab::kSosaExtend);
    if (local.empty()) continue;
    if (auto k = SensorKind::parse(local)) out.insert(*k);
  }
  return out;
}

}  // namespace

Graph model_to_triples(const ModelDescriptor& m) {
  validate(m);
  Graph g = with_prefixes();
  Term nn = model_iri(m.identifier);
  g.insert(nn, vocab::kType, vocab::kNeuralNetwork);
  g.insert(nn, vocab::kType, vocab::kAlgorithm);
  g.insert(nn, vocab::kType, vocab::kSoftwareSourceCode);
  g.insert(nn, vocab::kIdentifier, string_literal(m.identifier));
  if (!m.name.empty()) g.insert(nn, vocab::kName, string_literal(m.name));
  if (!m.description.empty()) {
    g.insert(nn, vocab::kDescription, string_literal(m.description));
  }
  if (!m.creator.empty()) g.insert(nn, vocab::kCreator, string_literal(m.creator));
  if (!m.citation.empty()) g.insert(nn, vocab::kCitation, Term::iri(m.citation));
  if (!m.code_repository.empty()) {
    g.insert(nn, vocab::kCodeRepository, Term::iri(m.code_repository));
  }
  if (!m.training_dataset.empty()) {
    g.insert(nn, vocab::kTrainingDataset, Term::iri(m.training_dataset));
  }
  if (!m.date_created.empty()) {
    g.insert(nn, vocab::kDateCreated, Term::literal(m.date_created, rdf::xsd::kDate));
  }
  g.insert(nn, vocab::kHasCategory, nnet_term(m.category.name()));
  for (const auto& [kind, value] : m.metrics) {
    Term metric = g.fresh_blank();
    g.insert(nn, vocab::kHasMetric, metric);
    g.insert(metric, vocab::kType, nnet_term(kind));
    g.insert(metric, vocab::kHasMetricValue, decimal_literal(value));
  }
  g.insert(nn, vocab::kHasMacs, Term::literal(std::to_string(m.macs), rdf::xsd::kInteger));
  emit_memory(g, nn, vocab::kRam, m.min_ram_kb, m.ram_provenance);
  emit_memory(g, nn, vocab::kFlash, m.min_flash_kb, m.flash_provenance);
  if (!m.runtime_platform.empty()) {
    g.insert(nn, vocab::kHasRuntimePlatform, string_literal(m.runtime_platform));
  }

  Term input = g.fresh_blank();
  Term output = g.fresh_blank();
  g.insert(nn, vocab::kHasInput, input);
  g.insert(input, vocab::kType, vocab::kInput);
  g.insert(nn, vocab::kHasOutput, output);
  g.insert(output, vocab::kType, vocab::kOutput);
  for (const SensorKind& k : m.sensors) {
    Term sensor = g.fresh_blank();
    g.insert(sensor, vocab::kType, sensor_class(k));
    g.insert(sensor, vocab::kProvideInput, input);
  }

  for (const LayerDescriptor& l : m.layers) {
    Term layer = g.fresh_blank();
    g.insert(nn, vocab::kHasLayer, layer);
    g.insert(layer, vocab::kType, vocab::kLayer);
    g.insert(layer, vocab::kType, role_class(l.role));
    g.insert(layer, vocab::kHasIndex, Term::integer(l.index));
    g.insert(layer, vocab::kHasType, string_literal(l.layer_type));
    g.insert(layer, vocab::kHasInputShape, string_literal(format_shape(l.input_shape)));
    g.insert(layer, vocab::kHasOutputShape, string_literal(format_shape(l.output_shape)));
    if (l.quantization) {
      Term q = g.fresh_blank();
      g.insert(layer, vocab::kHasQuantization, q);
      g.insert(q, vocab::kHasScale, double_literal(l.quantization->scale));
      g.insert(q, vocab::kHasZeroPoint, Term::integer(l.quantization->zero_point));
      g.insert(q, vocab::kHasDataType, string_literal(l.quantization->dtype));
    }
  }
  for (const std::string& note : m.notes) {
    g.insert(nn, vocab::kComment, string_literal(note));
  }
  return g;
}

Graph device_to_triples(const DeviceDescriptor& d) {
  validate(d);
  Graph g = with_prefixes();
  Term dev = device_iri(d.device_id);
  g.insert(dev, vocab::kType, vocab::kSmartSensor);
  g.insert(dev, vocab::kIdentifier, string_literal(d.device_id));
  if (!d.title.empty()) g.insert(dev, vocab::kTitle, string_literal(d.title));
  for (const SensorKind& k : d.sensors) {
    Term sub = g.fresh_blank();
    g.insert(dev, vocab::kHasSubSystem, sub);
    g.insert(sub, vocab::kType, sensor_class(k));
  }
  Term mcu = g.fresh_blank();
  Term capability = g.fresh_blank();
  g.insert(dev, vocab::kHasSubSystem, mcu);
  g.insert(mcu, vocab::kType, vocab::kMicroController);
  g.insert(mcu, vocab::kHasSystemCapability, capability);
  auto property = [&](const Term& type, Kilobytes kb) {
    Term prop = g.fresh_blank();
    g.insert(capability, vocab::kHasSystemProperty, prop);
    g.insert(prop, vocab::kType, type);
    g.insert(prop, vocab::kValue, kb_literal(kb));
    g.insert(prop, vocab::kUnitCode, vocab::kKilobyte);
  };
  property(vocab::kRam, d.ram_kb);
  property(vocab::kFlash, d.flash_kb);
  for (const Endpoint& e : d.endpoints) {
    Term form = g.fresh_blank();
    g.insert(dev, vocab::kHasForm, form);
    g.insert(form, vocab::kProtocol, string_literal(e.protocol));
    g.insert(form, vocab::kHref, string_literal(e.address));
  }
  return g;
}

ModelDescriptor triples_to_model(const Graph& g, const Term& node) {
  const std::string where = node.to_string();
  if (!has_type(g, node, vocab::kNeuralNetwork)) {
    throw IncompleteDescriptionError(where, "rdf:type nnet:NeuralNetwork");
  }
  ModelDescriptor m;
  auto id = g.object_of(node, vocab::kIdentifier);
  if (!id || !id->is_literal()) throw IncompleteDescriptionError(where, "identifier");
  m.identifier = id->value();
  m.name = text_of(g, node, vocab::kName);
  m.description = text_of(g, node, vocab::kDescription);
  m.creator = text_of(g, node, vocab::kCreator);
  m.citation = text_of(g, node, vocab::kCitation);
  m.code_repository = text_of(g, node, vocab::kCodeRepository);
  m.training_dataset = text_of(g, node, vocab::kTrainingDataset);
  m.date_created = text_of(g, node, vocab::kDateCreated);
  m.runtime_platform = text_of(g, node, vocab::kHasRuntimePlatform);

  std::vector<std::string> problems;
  if (auto c = g.object_of(node, vocab::kHasCategory)) {
    auto parsed = Category::parse(local_in(*c, vocab::kNnet));
    if (parsed) {
      m.category = *parsed;
    } else {
      problems.push_back("category: not an nnet term");
    }
  }
  for (const Term& metric : g.objects_of(node, vocab::kHasMetric)) {
    auto value = double_of(g, metric, vocab::kHasMetricValue);
    for (const Term& t : g.objects_of(metric, vocab::kType)) {
      std::string kind = local_in(t, vocab::kNnet);
      if (kind.empty()) continue;
      if (!value) {
        problems.push_back("metric " + kind + ": missing value");
      } else if (!m.metrics.emplace(kind, *value).second) {
        problems.push_back("metrics: more than one " + kind);
      }
    }
  }
  if (auto macs = integer_of(g, node, vocab::kHasMacs); macs && *macs >= 0) {
    m.macs = static_cast<std::uint64_t>(*macs);
  }

  MemoryReading ram = read_condition(g, node, vocab::kRam);
  if (!ram.kb) throw IncompleteDescriptionError(where, "RAM minimum (s3n_extend:RAM schema:minValue)");
  MemoryReading flash = read_condition(g, node, vocab::kFlash);
  if (!flash.kb) throw IncompleteDescriptionError(where, "Flash minimum (s3n_extend:Flash schema:minValue)");
  m.min_ram_kb = *ram.kb;
  m.ram_provenance = ram.provenance;
  m.min_flash_kb = *flash.kb;
  m.flash_provenance = flash.provenance;

  for (const Term& input : g.objects_of(node, vocab::kHasInput)) {
    for (const Term& sensor : g.subjects_of(vocab::kProvideInput, input)) {
      auto kinds = sensor_types(g, sensor);
      m.sensors.insert(kinds.begin(), kinds.end());
    }
  }

  for (const Term& layer : g.objects_of(node, vocab::kHasLayer)) {
    LayerDescriptor l;
    auto index = integer_of(g, layer, vocab::kHasIndex);
    if (!index) {
      problems.push_back("layer: missing index");
      continue;
    }
    l.index = static_cast<int>(*index);
    if (has_type(g, layer, vocab::kInputLayer)) {
      l.role = LayerRole::kInput;
    } else if (has_type(g, layer, vocab::kOutputLayer)) {
      l.role = LayerRole::kOutput;
    } else {
      l.role = LayerRole::kMiddle;
    }
    l.layer_type = text_of(g, layer, vocab::kHasType);
    auto in = parse_shape(text_of(g, layer, vocab::kHasInputShape));
    auto out = parse_shape(text_of(g, layer, vocab::kHasOutputShape));
    if (in) l.input_shape = *in;
    if (out) l.output_shape = *out;
    if (auto q = g.object_of(layer, vocab::kHasQuantization)) {
      Quantization quant;
      quant.scale = double_of(g, *q, vocab::kHasScale).value_or(0.0);
      quant.zero_point = integer_of(g, *q, vocab::kHasZeroPoint).value_or(0);
      quant.dtype = text_of(g, *q, vocab::kHasDataType);
      l.quantization = quant;
    }
    m.layers.push_back(std::move(l));
  }
  std::sort(m.layers.begin(), m.layers.end(),
            [](const LayerDescriptor& a, const LayerDescriptor& b) {
              return a.index < b.index;
            });
  for (const Term& c : g.objects_of(node, vocab::kComment)) {
    if (c.is_literal()) m.notes.push_back(c.value());
  }
  std::sort(m.notes.begin(), m.notes.end());

  auto v = violations(m);
  problems.insert(problems.end(), v.begin(), v.end());
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return m;
}

DeviceDescriptor triples_to_device(const Graph& g, const Term& node) {
  const std::string where = node.to_string();
  if (!has_type(g, node, vocab::kSmartSensor)) {
    throw IncompleteDescriptionError(where, "rdf:type s3n:SmartSensor");
  }
  DeviceDescriptor d;
  d.device_id = text_of(g, node, vocab::kIdentifier);
  if (d.device_id.empty()) d.device_id = local_in(node, vocab::kDeviceBase);
  if (d.device_id.empty()) throw IncompleteDescriptionError(where, "identifier");
  d.title = text_of(g, node, vocab::kTitle);

  std::optional<Kilobytes> ram;
  std::optional<Kilobytes> flash;
  for (const Term& sub : g.objects_of(node, vocab::kHasSubSystem)) {
    if (has_type(g, sub, vocab::kMicroController)) {
      for (const Term& cap : g.objects_of(sub, vocab::kHasSystemCapability)) {
        for (const Term& prop : g.objects_of(cap, vocab::kHasSystemProperty)) {
          if (has_type(g, prop, vocab::kRam) && !ram) {
            ram = kb_of(g, prop, vocab::kValue);
          } else if (has_type(g, prop, vocab::kFlash) && !flash) {
            flash = kb_of(g, prop, vocab::kValue);
          }
        }
      }
      continue;
    }
    auto kinds = sensor_types(g, sub);
    d.sensors.insert(kinds.begin(), kinds.end());
  }
  if (!ram) throw IncompleteDescriptionError(where, "RAM capacity (s3n_extend:RAM schema:value)");
  if (!flash) throw IncompleteDescriptionError(where, "Flash capacity (s3n_extend:Flash schema:value)");
  d.ram_kb = *ram;
  d.flash_kb = *flash;
  for (const Term& form : g.objects_of(node, vocab::kHasForm)) {
    d.endpoints.insert(Endpoint{text_of(g, form, vocab::kProtocol),
                                text_of(g, form, vocab::kHref)});
  }
  validate(d);
  return d;
}

std::vector<Term> model_nodes(const Graph& g) {
  return g.subjects_of(vocab::kType, vocab::kNeuralNetwork);
}

std::vector<Term> device_nodes(const Graph& g) {
  return g.subjects_of(vocab::kType, vocab::kSmartSensor);
}

}  // namespace tinykg::ontology
