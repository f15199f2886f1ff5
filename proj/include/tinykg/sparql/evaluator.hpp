// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "tinykg/rdf/graph.hpp"
#include "tinykg/sparql/query.hpp"

namespace tinykg::sparql {

/// Result rows; `rows[i][k]` binds `variables[k]`.
struct Solution {
  std::vector<std::string> variables;
  std::vector<std::vector<rdf::Term>> rows;

  /// Column index of `variable`, or -1.
  int column(std::string_view variable) const;
};

/// Bag-semantics evaluation of the basic graph pattern, filtered, projected
/// and ordered. Without ORDER BY rows are sorted by their binding tuple;
/// with it, ties fall back to that same tuple order.
///
/// A type mismatch in a filter (e.g. comparing a non-numeric term with a
/// number) makes the filter false for that row.
Solution evaluate(const QueryAst& query, const rdf::Graph& graph);

/// Ordering used by ORDER BY: numeric literals compare by value and sort
/// before other literals; otherwise blank < IRI < literal, then by term.
bool order_less(const rdf::Term& a, const rdf::Term& b);

}  // namespace tinykg::sparql
