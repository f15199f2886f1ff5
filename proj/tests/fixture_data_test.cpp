// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

// data/fixture_kg.ttl is generated from the in-code fixture. Set
// TINYKG_WRITE_FIXTURE=1 to regenerate it.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "support/fixture_kg.hpp"
#include "support/paths.hpp"
#include "tinykg/rdf/turtle.hpp"

namespace tinykg {
namespace {

TEST(FixtureData, ShippedTurtleMatchesFixtureGraph) {
  auto path = testing::source_path("data/fixture_kg.ttl");
  auto g = testing::fixture_graph();
  if (std::getenv("TINYKG_WRITE_FIXTURE")) {
    std::ofstream(path, std::ios::binary) << rdf::serialize_turtle(g);
  }
  auto shipped = rdf::parse_turtle(testing::read_file(path));
  EXPECT_EQ(shipped.size(), g.size());
  EXPECT_TRUE(rdf::isomorphic(shipped, g));
}

}  // namespace
}  // namespace tinykg
