// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tinykg/error.hpp"
#include "tinykg/rdf/graph.hpp"

namespace tinykg::rdf {

class TurtleSyntaxError : public Error {
 public:
  TurtleSyntaxError(std::size_t line, std::size_t column, std::string expected);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

class UndefinedPrefixError : public Error {
 public:
  UndefinedPrefixError(std::string prefix, std::size_t line, std::size_t column);

  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

/// Parses the Turtle subset: `@prefix`/`PREFIX`, IRIs, prefixed names, `a`,
/// `;` and `,` lists, `_:` labels, `[ ... ]` property lists, string,
/// integer, decimal and double literals, `^^` datatypes and `@lang` tags.
///
/// Blank-node labels in the result are freshly minted; the document's own
/// labels only define identity within the document.
Graph parse_turtle(std::string_view text);

/// Deterministic Turtle rendering: prefixes sorted by name, subjects grouped
/// and sorted, then predicates, then objects. Declared prefixes abbreviate
/// IRIs where the local part is a plain name.
std::string serialize_turtle(const Graph& g);

}  // namespace tinykg::rdf
