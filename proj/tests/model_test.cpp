// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "support/chain_generator.hpp"
#include "tinykg/model/analysis.hpp"
#include "tinykg/model/describe.hpp"
#include "tinykg/model/fixture.hpp"
#include "tinykg/model/model_graph.hpp"

namespace tinykg::model {
namespace {

LayerSpec layer(int opcode, std::vector<std::int32_t> in, std::vector<std::int32_t> out,
                std::vector<std::int32_t> weights = {}) {
  LayerSpec l;
  l.opcode = opcode;
  l.input_shape = std::move(in);
  l.output_shape = std::move(out);
  l.weight_shape = std::move(weights);
  return l;
}

ModelGraph parse(const std::vector<LayerSpec>& spec, const FixtureOptions& opt = {}) {
  return read_model(build_fixture(spec, opt));
}

TEST(ReadModelTest, SingleFullyConnectedLayer) {
  ModelGraph g = parse({fully_connected(16, 8)});
  ASSERT_EQ(g.operators.size(), 1u);
  EXPECT_EQ(g.tensors.size(), 3u);
  EXPECT_EQ(g.operators[0].opcode, 9);
  EXPECT_EQ(g.operators[0].layer_type, "FullyConnected");
  EXPECT_EQ(g.tensors[1].shape, (std::vector<std::int32_t>{8, 16}));
  EXPECT_TRUE(g.tensors[1].is_constant);
  EXPECT_FALSE(g.tensors[0].is_constant);
  EXPECT_EQ(g.version, 3u);
  EXPECT_EQ(g.description, "tinykg fixture");
  EXPECT_TRUE(g.warnings.empty());
  EXPECT_EQ(parse({fully_connected(16, 8, true)}).tensors.size(), 4u);
}

TEST(ReadModelTest, ChainOfTwoOperators) {
  ModelGraph g = parse({fully_connected(16, 8), fully_connected(8, 4)});
  EXPECT_EQ(g.operators.size(), 2u);
  EXPECT_EQ(g.graph_inputs, (std::vector<std::int32_t>{0}));
  EXPECT_EQ(g.graph_outputs.size(), 1u);
  EXPECT_EQ(g.opcodes.size(), 1u);
}

TEST(ReadModelTest, TinyBuffersAreMalformed) {
  std::vector<std::uint8_t> four(4, 0);
  EXPECT_THROW(read_model(four), MalformedFileError);
  EXPECT_THROW(read_model({}), MalformedFileError);
  std::vector<std::uint8_t> eight(8, 0);
  EXPECT_THROW(read_model(eight), MalformedFileError);
}

TEST(ReadModelTest, ErrorsCarryPositions) {
  auto bytes = build_fixture({fully_connected(16, 8)});
  std::uint32_t bogus = static_cast<std::uint32_t>(bytes.size() + 100);
  std::memcpy(bytes.data(), &bogus, 4);
  try {
    read_model(bytes);
    FAIL();
  } catch (const MalformedFileError& e) {
    EXPECT_EQ(e.position(), 0u);
    EXPECT_NE(std::string(e.what()).find("malformed-file"), std::string::npos);
  }
}

TEST(ReadModelTest, MissingIdentifierOnlyWarns) {
  FixtureOptions opt;
  opt.file_identifier = false;
  ModelGraph g = parse({fully_connected(4, 2)}, opt);
  ASSERT_EQ(g.warnings.size(), 1u);
  EXPECT_NE(g.warnings[0].find("identifier"), std::string::npos);
}

TEST(ReadModelTest, ExtraSubgraphsWarnAndAreIgnored) {
  FixtureOptions opt;
  opt.extra_subgraphs = 2;
  ModelGraph g = parse({fully_connected(4, 2)}, opt);
  ASSERT_EQ(g.warnings.size(), 1u);
  EXPECT_NE(g.warnings[0].find("3 subgraphs"), std::string::npos);
  EXPECT_EQ(g.subgraph_name, "main");
  EXPECT_EQ(g.operators.size(), 1u);
}

TEST(ReadModelTest, DeprecatedOpcodeSlotIsHonoured) {
  FixtureOptions opt;
  opt.deprecated_opcode_field = true;
  ModelGraph g = parse({layer(op::kQuantize, {1, 4}, {1, 4}), fully_connected(4, 2)}, opt);
  EXPECT_EQ(g.operators[0].layer_type, "Quantize");
  EXPECT_EQ(g.operators[1].layer_type, "FullyConnected");
}

TEST(ReadModelTest, OpcodeNames) {
  EXPECT_EQ(layer_type_name(3), "Conv2D");
  EXPECT_EQ(layer_type_name(4), "DepthwiseConv2D");
  EXPECT_EQ(layer_type_name(1), "AveragePool2D");
  EXPECT_EQ(layer_type_name(17), "MaxPool2D");
  EXPECT_EQ(layer_type_name(25), "Softmax");
  EXPECT_EQ(layer_type_name(22), "Reshape");
  EXPECT_EQ(layer_type_name(6), "Dequantize");
  EXPECT_EQ(layer_type_name(114), "Quantize");
  EXPECT_EQ(layer_type_name(200), "Other(200)");
}

TEST(ReadModelTest, TensorByteSizes) {
  TensorInfo t;
  t.shape = {1, 3, 5};
  t.type = TensorType::kFloat32;
  EXPECT_EQ(t.byte_size(), 60u);
  t.type = TensorType::kInt8;
  EXPECT_EQ(t.byte_size(), 15u);
  t.type = TensorType::kInt4;
  EXPECT_EQ(t.byte_size(), 8u);
  t.type = TensorType::kInt16;
  EXPECT_EQ(t.byte_size(), 30u);
}

TEST(FixtureTest, FormatContract) {
  auto bytes = build_fixture({fully_connected(16, 8), fully_connected(8, 4)});
  ASSERT_GE(bytes.size(), 8u);
  EXPECT_EQ(std::memcmp(bytes.data() + 4, "TFL3", 4), 0);
  std::uint32_t root;
  std::memcpy(&root, bytes.data(), 4);
  EXPECT_LT(root, bytes.size());
  EXPECT_EQ(root % 4, 0u);
}

TEST(FixtureTest, RejectsBadSpecs) {
  EXPECT_THROW(build_fixture({}), FixtureError);
  EXPECT_THROW(build_fixture({layer(200, {1}, {1})}), FixtureError);
  EXPECT_THROW(build_fixture({fully_connected(16, 8), fully_connected(4, 2)}), FixtureError);
}

TEST(FixtureTest, PadsToExactSizes) {
  for (std::size_t size : {5120u, 543744u, 1000u}) {
    FixtureOptions opt;
    opt.pad_to_bytes = size;
    auto bytes = build_fixture({fully_connected(16, 8)}, opt);
    EXPECT_EQ(bytes.size(), size);
    EXPECT_EQ(read_model(bytes).file_size_bytes, size);
  }
}

TEST(FixtureTest, RandomChainsRoundTrip) {
  testing::ChainGenerator gen(1234);
  for (int i = 0; i < 150; ++i) {
    auto spec = gen.next();
    ModelGraph g = read_model(build_fixture(spec));
    ASSERT_EQ(fixture_spec(g), spec) << "chain " << i;
    EXPECT_EQ(g.operators.size(), spec.size());
  }
}

TEST(FixtureFuzzTest, TruncationAndBitFlipsNeverEscape) {
  testing::ChainGenerator gen(77);
  std::mt19937 rng(78);
  int parsed = 0, rejected = 0;
  auto probe = [&](const std::vector<std::uint8_t>& bytes) {
    try {
      ModelGraph g = read_model(bytes);
      ++parsed;
      // Whatever parses must be safe to analyse.
      for (const auto& o : g.operators) {
        for (auto idx : o.inputs) ASSERT_LT(idx, static_cast<std::int32_t>(g.tensors.size()));
        for (auto idx : o.outputs) {
          ASSERT_GE(idx, 0);
          ASSERT_LT(idx, static_cast<std::int32_t>(g.tensors.size()));
        }
      }
      try {
        count_macs(g);
      } catch (const AnalysisError&) {
      }
      estimate_ram(g);
    } catch (const MalformedFileError&) {
      ++rejected;
    }
  };
  for (int i = 0; i < 40; ++i) {
    auto bytes = build_fixture(gen.next());
    for (std::size_t len = 0; len < bytes.size(); len += 1 + bytes.size() / 64) {
      probe(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + static_cast<long>(len)));
    }
    for (int flip = 0; flip < 60; ++flip) {
      auto copy = bytes;
      std::size_t flips = 1 + rng() % 4;
      for (std::size_t k = 0; k < flips; ++k) {
        copy[rng() % copy.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      }
      probe(copy);
    }
  }
  EXPECT_GT(rejected, 0);
  EXPECT_GT(parsed, 0);
}

TEST(MacTest, FullyConnected) {
  EXPECT_EQ(count_macs(parse({fully_connected(16, 8)})).total, 128u);
  MacReport r = count_macs(parse({fully_connected(16, 8), fully_connected(8, 4)}));
  EXPECT_EQ(r.per_layer, (std::vector<std::uint64_t>{128, 32}));
  EXPECT_EQ(r.total, 160u);
}

TEST(MacTest, Conv2DValidPadding) {
  auto g = parse({layer(op::kConv2D, {1, 4, 4, 1}, {1, 2, 2, 2}, {2, 3, 3, 1})});
  EXPECT_EQ(count_macs(g).total, 72u);
}

TEST(MacTest, DepthwiseAndZeroCostOps) {
  // 1x8x8x4 output, 3x3 kernel: 8*8*4*9
  auto g = parse({layer(op::kDepthwiseConv2D, {1, 8, 8, 4}, {1, 8, 8, 4}, {1, 3, 3, 4}),
                  layer(op::kAveragePool2D, {1, 8, 8, 4}, {1, 1, 1, 4}),
                  layer(op::kReshape, {1, 1, 1, 4}, {1, 4}), layer(op::kSoftmax, {1, 4}, {1, 4})});
  MacReport r = count_macs(g);
  EXPECT_EQ(r.per_layer, (std::vector<std::uint64_t>{2304, 0, 0, 0}));
  EXPECT_EQ(r.total, 2304u);
}

TEST(MacTest, InconsistentWeightsAreRejected) {
  auto g = parse({layer(op::kConv2D, {1, 4, 4, 1}, {1, 2, 2, 2}, {3, 3, 3, 1})});
  EXPECT_THROW(count_macs(g), AnalysisError);
  auto fc = parse({layer(op::kFullyConnected, {1, 16}, {1, 8}, {8, 5})});
  EXPECT_THROW(count_macs(fc), AnalysisError);
}

TEST(MacTest, TotalIsSumOfLayers) {
  testing::ChainGenerator gen(5);
  for (int i = 0; i < 50; ++i) {
    MacReport r = count_macs(read_model(build_fixture(gen.next())));
    std::uint64_t sum = 0;
    for (auto v : r.per_layer) sum += v;
    EXPECT_EQ(sum, r.total);
  }
}

TEST(RamTest, ChainPeakFollowsLiveness) {
  ModelGraph g = parse({fully_connected(16, 8), fully_connected(8, 4)});
  EXPECT_EQ(peak_activation_bytes(g), 24u);
  EXPECT_EQ(estimate_ram(g).to_string(), "0.1");
}

TEST(RamTest, IdentityModelCountsInputAndOutput) {
  ModelGraph g = parse({layer(op::kReshape, {1, 100}, {1, 100})});
  EXPECT_EQ(peak_activation_bytes(g), 200u);
  EXPECT_EQ(estimate_ram(g).to_string(), "0.2");
}

TEST(RamTest, ConstantWeightsAreExcluded) {
  ModelGraph g = parse({fully_connected(16, 8)});
  EXPECT_EQ(g.tensors[1].byte_size(), 128u);
  EXPECT_EQ(peak_activation_bytes(g), 24u);
}

TEST(RamTest, EstimateIsBoundedByTensorSizes) {
  testing::ChainGenerator gen(11);
  for (int i = 0; i < 100; ++i) {
    ModelGraph g = read_model(build_fixture(gen.next()));
    std::uint64_t largest = 0, sum = 0;
    for (const auto& t : g.tensors) {
      if (t.is_constant) continue;
      largest = std::max(largest, t.byte_size());
      sum += t.byte_size();
    }
    std::uint64_t peak = peak_activation_bytes(g);
    EXPECT_GE(peak, largest);
    EXPECT_LE(peak, sum);
  }
}

TEST(FlashTest, RoundsUpToOneDecimal) {
  EXPECT_EQ(estimate_flash(5120).tenths(), 50);
  EXPECT_EQ(estimate_flash(1).tenths(), 1);
  EXPECT_EQ(estimate_flash(543744).tenths(), 5310);
  EXPECT_EQ(estimate_flash(0).tenths(), 0);
}

ontology::Sidecar motion_sidecar() {
  ontology::Sidecar s;
  s.sensors = std::set<ontology::SensorKind>{ontology::SensorKind::accelerometer(),
                                             ontology::SensorKind::gyroscope()};
  s.ram_kb = Kilobytes::whole(116);
  s.flash_kb = Kilobytes::whole(531);
  return s;
}

TEST(DescribeTest, SidecarOverridesEstimates) {
  ModelGraph g = parse({fully_connected(16, 8), fully_connected(8, 4)});
  auto m = describe(g, motion_sidecar());
  EXPECT_EQ(m.min_ram_kb, Kilobytes::whole(116));
  EXPECT_EQ(m.min_flash_kb, Kilobytes::whole(531));
  EXPECT_EQ(m.ram_provenance, ontology::MemoryProvenance::kMeasured);
  EXPECT_EQ(m.sensors.size(), 2u);
  EXPECT_EQ(m.macs, 160u);
  ASSERT_EQ(m.layers.size(), 2u);
  EXPECT_EQ(m.layers[0].role, ontology::LayerRole::kInput);
  EXPECT_EQ(m.layers[1].role, ontology::LayerRole::kOutput);
  EXPECT_EQ(m.layers[1].input_shape, (std::vector<std::int64_t>{1, 8}));
  EXPECT_EQ(m.runtime_platform, "TFLite-Micro");
}

TEST(DescribeTest, EstimatesAreUsedWithoutOverrides) {
  ModelGraph g = parse({fully_connected(16, 8)});
  auto m = describe(g, {});
  EXPECT_TRUE(ontology::is_uuid(m.identifier));
  EXPECT_EQ(m.min_ram_kb, estimate_ram(g));
  EXPECT_EQ(m.min_flash_kb, estimate_flash(g.file_size_bytes));
  EXPECT_EQ(m.flash_provenance, ontology::MemoryProvenance::kEstimated);
  EXPECT_NE(describe(g, {}).identifier, m.identifier);
}

TEST(DescribeTest, PerChannelQuantizationIsReducedWithANote) {
  LayerSpec l = fully_connected(4, 3);
  l.quantization = OutputQuantization{{0.5f, 0.25f, 0.125f}, -3};
  auto m = describe(parse({l}), {});
  ASSERT_TRUE(m.layers[0].quantization);
  EXPECT_EQ(m.layers[0].quantization->scale, 0.5);
  EXPECT_EQ(m.layers[0].quantization->zero_point, -3);
  EXPECT_EQ(m.layers[0].quantization->dtype, "int8");
  ASSERT_EQ(m.notes.size(), 1u);
  EXPECT_NE(m.notes[0].find("per-channel"), std::string::npos);
}

TEST(DescribeTest, MetadataNeverChangesAnalysis) {
  ModelGraph g = parse({layer(op::kConv2D, {1, 4, 4, 1}, {1, 2, 2, 2}, {2, 3, 3, 1})});
  auto plain = describe(g, {});
  auto j = nlohmann::json::parse(R"({"name": "n", "description": "d", "creator": "c",
    "category": "Regression", "metric": [{"kind": "MAE", "value": 3.5}],
    "dataset": "https://d/x", "runtime": "TFLite-Micro"})");
  auto rich = describe(g, ontology::parse_sidecar(j));
  EXPECT_EQ(rich.macs, plain.macs);
  EXPECT_EQ(rich.min_ram_kb, plain.min_ram_kb);
  EXPECT_EQ(rich.min_flash_kb, plain.min_flash_kb);
  EXPECT_EQ(rich.category, ontology::Category::regression());
}

TEST(DescribeTest, InvalidAccuracyIsRejected) {
  auto j = nlohmann::json::parse(R"({"metric": {"kind": "Top_1_accuracy", "value": 1.3}})");
  EXPECT_THROW(ontology::parse_sidecar(j), ontology::ValidationError);
}

}  // namespace
}  // namespace tinykg::model
