// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "support/fixture_kg.hpp"
#include "support/paths.hpp"
#include "tinykg/ontology/json.hpp"
#include "tinykg/ontology/mapping.hpp"
#include "tinykg/ontology/validate_kg.hpp"
#include "tinykg/ontology/vocabulary.hpp"
#include "tinykg/rdf/turtle.hpp"
#include "tinykg/sparql/evaluator.hpp"

namespace tinykg::ontology {
namespace {

using nlohmann::json;

sparql::Solution run_query(const std::string& file, const rdf::Graph& g) {
  auto q = sparql::parse_query(testing::read_source(file), vocab::standard_prefixes());
  return sparql::evaluate(q, g);
}

bool numeric_equals(const rdf::Term& t, const char* lexical) {
  return t.is_numeric() && *t.numeric_value() == *rdf::Decimal::parse(lexical);
}

TEST(VocabularyTest, NamespacesAreVerbatim) {
  auto p = vocab::standard_prefixes();
  EXPECT_EQ(p.at("schema"), "https://schema.org");
  EXPECT_EQ(p.at("nnet"), "http://tinyml-schema.org/networkschema#");
  EXPECT_EQ(p.at("sosa_extend"), "http://tinyml-schema.org/sosa_extend#");
  EXPECT_EQ(p.at("ssn_extend"), "http://tinyml-schema.org/ssn_extend#");
  EXPECT_EQ(p.at("s3n_extend"), "http://tinyml-schema.org/s3n_extend#");
  EXPECT_EQ(p.at("s3n"), "http://w3id.org/s3n/");
  EXPECT_EQ(p.at("td"), "http://www.w3.org/ns/td#");
  EXPECT_EQ(p.at("om"), "http://www.ontology-of-units-of-measure.org/resource/om-2/");
  EXPECT_EQ(p.at("ssn-system"), "http://www.w3.org/ns/ssn/systems/");
  EXPECT_EQ(vocab::kValue.value(), "https://schema.orgvalue");
  EXPECT_EQ(vocab::kKilobyte.value(),
            "http://www.ontology-of-units-of-measure.org/resource/om-2/kilobyte");
}

TEST(SensorKindTest, ParsesKnownAndCustomKinds) {
  EXPECT_EQ(SensorKind::parse("camera"), SensorKind::camera());
  EXPECT_EQ(SensorKind::parse("Gyroscope"), SensorKind::gyroscope());
  auto custom = SensorKind::parse("Thermometer");
  ASSERT_TRUE(custom);
  EXPECT_EQ(custom->type(), SensorKind::Type::kOther);
  EXPECT_EQ(custom->name(), "Thermometer");
  EXPECT_FALSE(SensorKind::parse("not a name"));
  EXPECT_FALSE(SensorKind::parse(""));
}

TEST(ModelMappingTest, SecondQueryBindsMemoryMinima) {
  const auto& m = testing::fixture_model(testing::kPersonDetectUuid);
  rdf::Graph g = model_to_triples(m);
  auto s = run_query("queries/query2.rq", g);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0][0].value(), testing::kPersonDetectUuid);
  EXPECT_TRUE(numeric_equals(s.rows[0][1], "7387976"));
  EXPECT_TRUE(numeric_equals(s.rows[0][2], "116"));
  EXPECT_TRUE(numeric_equals(s.rows[0][3], "531"));
}

TEST(ModelMappingTest, BrowsingQueryBindsAccuracy) {
  rdf::Graph g = model_to_triples(testing::fixture_model(testing::kYesNoUuid));
  auto s = run_query("queries/query3.rq", g);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0][1], vocab::kClassification);
  EXPECT_TRUE(numeric_equals(s.rows[0][2], "0.82"));
  EXPECT_TRUE(numeric_equals(s.rows[0][3], "381824"));
  EXPECT_TRUE(numeric_equals(s.rows[0][4], "8.8"));
  EXPECT_TRUE(numeric_equals(s.rows[0][5], "8.9"));
}

TEST(ModelMappingTest, EmitsExpectedTypesAndIri) {
  const auto& m = testing::fixture_model(testing::kYesNoUuid);
  rdf::Graph g = model_to_triples(m);
  rdf::Term node = model_iri(m.identifier);
  EXPECT_EQ(node.value(), std::string("http://tinyml-schema.org/neuralnetwork/") +
                              testing::kYesNoUuid);
  EXPECT_TRUE(g.contains({node, vocab::kType, vocab::kNeuralNetwork}));
  EXPECT_TRUE(g.contains({node, vocab::kType, vocab::kAlgorithm}));
  EXPECT_TRUE(g.contains({node, vocab::kType, vocab::kSoftwareSourceCode}));
  EXPECT_EQ(g.objects_of(node, vocab::kHasLayer).size(), m.layers.size());
}

TEST(ModelMappingTest, RejectsInvalidDescriptors) {
  ModelDescriptor m = testing::fixture_model(testing::kYesNoUuid);
  m.identifier = "not-a-uuid";
  m.metrics["Top_1_accuracy"] = 1.3;
  try {
    model_to_triples(m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.fields().size(), 2u);
  }
  ModelDescriptor gap = testing::fixture_model(testing::kYesNoUuid);
  gap.layers[1].index = 5;
  EXPECT_THROW(model_to_triples(gap), ValidationError);
}

TEST(DeviceMappingTest, FirstQueryBindsCapabilities) {
  rdf::Graph g = device_to_triples(testing::fixture_device("002"));
  auto s = run_query("queries/query1.rq", g);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0][0], device_iri("002"));
  EXPECT_TRUE(numeric_equals(s.rows[0][1], "172"));
  EXPECT_TRUE(numeric_equals(s.rows[0][2], "628"));
}

TEST(DeviceMappingTest, MissingGyroscopeIsNotMatched) {
  DeviceDescriptor d = testing::fixture_device("002");
  d.sensors.erase(SensorKind::gyroscope());
  EXPECT_TRUE(run_query("queries/query1.rq", device_to_triples(d)).rows.empty());
}

TEST(DeviceMappingTest, SensorlessDeviceIsValid) {
  DeviceDescriptor d;
  d.device_id = "bare";
  d.ram_kb = Kilobytes::whole(32);
  d.flash_kb = Kilobytes::whole(128);
  rdf::Graph g = device_to_triples(d);
  EXPECT_FALSE(g.empty());
  EXPECT_TRUE(validate_kg(g).clean());
  EXPECT_TRUE(run_query("queries/query1.rq", g).rows.empty());
  EXPECT_EQ(triples_to_device(g, device_iri("bare")), d);
}

TEST(DeviceMappingTest, RejectsInvalidDescriptors) {
  DeviceDescriptor d;
  d.device_id = "has space";
  EXPECT_THROW(device_to_triples(d), ValidationError);
}

TEST(RoundTripTest, FixtureDescriptorsSurvive) {
  for (const auto& m : testing::fixture_models()) {
    rdf::Graph g = model_to_triples(m);
    EXPECT_EQ(triples_to_model(g, model_iri(m.identifier)), m) << m.name;
    // Through Turtle text as well.
    rdf::Graph back = rdf::parse_turtle(rdf::serialize_turtle(g));
    EXPECT_EQ(triples_to_model(back, model_iri(m.identifier)), m) << m.name;
  }
  for (const auto& d : testing::fixture_devices()) {
    EXPECT_EQ(triples_to_device(device_to_triples(d), device_iri(d.device_id)), d);
  }
}

TEST(RoundTripTest, RandomDescriptorsSurvive) {
  std::mt19937 rng(5);
  auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int i = 0; i < 100; ++i) {
    ModelDescriptor m;
    m.identifier = generate_uuid();
    m.name = "model " + std::to_string(i);
    if (pick(2)) m.description = "desc \"quoted\"\nline";
    if (pick(2)) m.training_dataset = "https://data.example/set" + std::to_string(i);
    if (pick(2)) m.date_created = "2023-11-0" + std::to_string(1 + pick(9));
    m.category = pick(3) == 0 ? Category::regression()
                              : pick(2) ? Category::classification() : *Category::parse("Detection");
    if (pick(2)) m.metrics["Top_1_accuracy"] = pick(1001) / 1000.0;
    if (pick(2)) m.metrics["F1_score"] = pick(1000) / 7.0;
    m.macs = static_cast<std::uint64_t>(pick(1 << 30)) * 7;
    m.min_ram_kb = Kilobytes::from_tenths(pick(100000));
    m.min_flash_kb = Kilobytes::from_tenths(pick(100000));
    m.ram_provenance = pick(2) ? MemoryProvenance::kMeasured : MemoryProvenance::kEstimated;
    m.runtime_platform = pick(2) ? "TFLite-Micro" : "";
    if (pick(2)) m.sensors.insert(SensorKind::camera());
    if (pick(2)) m.sensors.insert(*SensorKind::parse("Thermometer"));
    int layers = pick(5);
    for (int k = 0; k < layers; ++k) {
      LayerDescriptor l;
      l.index = k;
      l.role = role_for_position(k, layers);
      l.layer_type = pick(2) ? "Conv2D" : "Other(" + std::to_string(pick(200)) + ")";
      l.input_shape = {1, pick(64) + 1};
      l.output_shape = {1, pick(64) + 1, 3};
      if (pick(2)) l.quantization = Quantization{1.0 / (pick(500) + 1), pick(256) - 128, "int8"};
      m.layers.push_back(l);
    }
    if (pick(3) == 0) m.notes = {"a note", "b note"};
    EXPECT_EQ(triples_to_model(model_to_triples(m), model_iri(m.identifier)), m) << i;
  }
}

TEST(InverseMappingTest, MissingIdentifierIsNamed) {
  const auto& m = testing::fixture_model(testing::kYesNoUuid);
  rdf::Graph g = model_to_triples(m);
  rdf::Graph pruned;
  for (const auto& t : g.triples()) {
    if (t.predicate != vocab::kIdentifier) pruned.insert(t);
  }
  try {
    triples_to_model(pruned, model_iri(m.identifier));
    FAIL();
  } catch (const IncompleteDescriptionError& e) {
    EXPECT_EQ(e.property(), "identifier");
  }
}

TEST(InverseMappingTest, DuplicateMetricKindIsRejected) {
  const auto& m = testing::fixture_model(testing::kYesNoUuid);
  rdf::Graph g = model_to_triples(m);
  rdf::Term node = model_iri(m.identifier);
  rdf::Term extra = g.fresh_blank();
  g.insert(node, vocab::kHasMetric, extra);
  g.insert(extra, vocab::kType, vocab::kTop1Accuracy);
  g.insert(extra, vocab::kHasMetricValue, rdf::Term::decimal("0.5"));
  EXPECT_THROW(triples_to_model(g, node), ValidationError);
}

TEST(ValidateKgTest, FixtureGraphIsClean) {
  rdf::Graph g = testing::fixture_graph();
  auto report = validate_kg(g);
  for (const auto& f : report.findings) ADD_FAILURE() << f.node << ": " << f.message;
  EXPECT_EQ(model_nodes(g).size(), 23u);
  EXPECT_EQ(device_nodes(g).size(), 6u);
}

TEST(ValidateKgTest, MissingUnitCodeIsReported) {
  rdf::Graph g = device_to_triples(testing::fixture_device("004"));
  rdf::Graph pruned;
  bool dropped = false;
  for (const auto& t : g.triples()) {
    if (!dropped && t.predicate == vocab::kUnitCode) {
      dropped = true;
      continue;
    }
    pruned.insert(t);
  }
  auto report = validate_kg(pruned);
  int missing = 0;
  for (const auto& f : report.findings) missing += f.message == "missing unitCode";
  EXPECT_EQ(missing, 1);
}

TEST(ValidateKgTest, UnitMismatchAndDanglingSensor) {
  rdf::Graph g = device_to_triples(testing::fixture_device("004"));
  auto props = g.subjects_of(vocab::kType, vocab::kRam);
  ASSERT_EQ(props.size(), 1u);
  g.insert(props[0], vocab::kUnitCode, vocab::term(vocab::kOm, "megabyte"));
  rdf::Term sensor = g.fresh_blank();
  g.insert(sensor, vocab::kProvideInput, rdf::Term::iri("http://e/nowhere"));
  auto report = validate_kg(g);
  ASSERT_EQ(report.findings.size(), 2u);
  bool mismatch = false, dangling = false;
  for (const auto& f : report.findings) {
    mismatch |= f.message.find("unit mismatch") != std::string::npos;
    dangling |= f.message.find("dangling sensor") != std::string::npos;
  }
  EXPECT_TRUE(mismatch);
  EXPECT_TRUE(dangling);
}

TEST(ValidateKgTest, LayerlessModelWarns) {
  ModelDescriptor m = testing::fixture_model(testing::kYesNoUuid);
  m.layers.clear();
  auto report = validate_kg(model_to_triples(m));
  ASSERT_EQ(report.findings.size(), 1u);
  EXPECT_EQ(report.findings[0].severity, Severity::kWarning);
}

TEST(ValidateKgTest, DuplicateDeviceIdsAreReported) {
  rdf::Graph g = device_to_triples(testing::fixture_device("004"));
  rdf::Term twin = rdf::Term::iri("http://e/twin");
  g.insert(twin, vocab::kType, vocab::kSmartSensor);
  g.insert(twin, vocab::kIdentifier, rdf::Term::literal("004"));
  // The twin has no MCU, so it is also incomplete.
  EXPECT_GE(validate_kg(g).findings.size(), 1u);
}

TEST(NamespaceTest, EveryFixtureIriUsesADeclaredNamespace) {
  rdf::Graph g = testing::fixture_graph();
  auto prefixes = vocab::standard_prefixes();
  auto declared = [&prefixes](const rdf::Term& t) {
    for (const auto& [name, ns] : prefixes) {
      if (t.value().rfind(ns, 0) == 0) return true;
    }
    return false;
  };
  for (const auto& t : g.triples()) {
    EXPECT_TRUE(declared(t.predicate)) << t.predicate.value();
    if (t.subject.is_iri()) EXPECT_TRUE(declared(t.subject)) << t.subject.value();
    // Objects include external URLs (citations, datasets); only check vocabulary objects.
    if (t.predicate == vocab::kType) EXPECT_TRUE(declared(t.object)) << t.object.value();
  }
}

TEST(SidecarTest, ParsesAllFields) {
  json j = json::parse(R"({
    "identifier": "3e7d9a14-c2b8-4f65-a0d3-91e5b7c48f26",
    "name": "Micro speech", "description": "Classify yes/no keywords",
    "creator": "someone", "citation": "https://arxiv.org/abs/1",
    "code_repository": "https://github.com/x/y", "dataset": "https://d/speech_commands",
    "date_created": "2021-03-04", "category": "Classification",
    "metric": {"kind": "Top_1_accuracy", "value": 0.82},
    "sensors": ["Microphone"], "runtime": "TFLite-Micro",
    "ram_kb": 8.8, "flash_kb": 8.9
  })");
  Sidecar s = parse_sidecar(j);
  EXPECT_EQ(*s.identifier, testing::kYesNoUuid);
  EXPECT_EQ(s.metrics.at("Top_1_accuracy"), 0.82);
  EXPECT_EQ(s.sensors->size(), 1u);
  EXPECT_EQ(s.ram_kb->tenths(), 88);
  EXPECT_EQ(s.flash_kb->tenths(), 89);
  EXPECT_EQ(s.category, Category::classification());
}

TEST(SidecarTest, CollectsEveryViolation) {
  json j = json::parse(R"({
    "identifier": "xyz", "metric": {"value": 1.3}, "sensors": ["Camera", 5],
    "ram_kb": -1, "bogus": true, "date_created": "yesterday"
  })");
  try {
    parse_sidecar(j);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.fields().size(), 6u);
    bool metric = false;
    for (const auto& f : e.fields()) metric |= f.find("outside [0,1]") != std::string::npos;
    EXPECT_TRUE(metric);
  }
}

TEST(DeviceManifestTest, ParsesAndValidates) {
  json j = json::parse(R"({"device_id": "002", "title": "t",
    "sensors": ["Accelerometer", "Gyroscope"], "ram_kb": 172, "flash_kb": 628,
    "endpoints": [{"protocol": "loopback", "address": "002"}]})");
  DeviceDescriptor d = parse_device_manifest(j);
  EXPECT_EQ(d.ram_kb, Kilobytes::whole(172));
  EXPECT_EQ(d.endpoints.size(), 1u);
  EXPECT_THROW(parse_device_manifest(json::parse(R"({"device_id": "x", "ram_kb": 0,
    "flash_kb": 1})")),
               ValidationError);
  EXPECT_THROW(parse_device_manifest(json::parse(R"({"title": "no id"})")), ValidationError);
}

TEST(JsonTest, DescriptorsRenderKilobytes) {
  json m = to_json(testing::fixture_model(testing::kYesNoUuid));
  EXPECT_EQ(m["min_ram_kb"], 8.8);
  json d = to_json(testing::fixture_device("002"));
  EXPECT_EQ(d["ram_kb"], 172);
  EXPECT_TRUE(d["ram_kb"].is_number_integer());
  EXPECT_EQ(d["iri"], "http://tinyml-schema.org/device/002");
}

}  // namespace
}  // namespace tinykg::ontology
