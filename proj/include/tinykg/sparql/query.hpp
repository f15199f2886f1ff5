// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tinykg/error.hpp"
#include "tinykg/rdf/graph.hpp"
#include "tinykg/rdf/term.hpp"

namespace tinykg::sparql {

class QueryError : public Error {
 public:
  using Error::Error;
};

/// Malformed query text; carries the 1-based position of the offending token.
class QuerySyntaxError : public QueryError {
 public:
  QuerySyntaxError(std::size_t line, std::size_t column, std::string message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownPrefixError : public QueryError {
 public:
  UnknownPrefixError(std::string prefix, std::size_t line, std::size_t column);
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

/// A SPARQL construct outside the supported subset (OPTIONAL, UNION, ...).
class UnsupportedFeatureError : public QueryError {
 public:
  explicit UnsupportedFeatureError(std::string keyword);
  const std::string& keyword() const { return keyword_; }

 private:
  std::string keyword_;
};

class InvalidRegexError : public QueryError {
 public:
  InvalidRegexError(std::string pattern, const std::string& reason);
  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
};

struct Variable {
  std::string name;  // without the leading '?'
  auto operator<=>(const Variable&) const = default;
};

using PatternTerm = std::variant<rdf::Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  auto operator<=>(const TriplePattern&) const = default;
};

enum class CompareOp { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual, kNotEqual };

/// `?v` or `str(?v)`.
struct Operand {
  std::string variable;
  bool as_string = false;
  auto operator<=>(const Operand&) const = default;
};

struct CompareFilter {
  Operand lhs;
  CompareOp op = CompareOp::kEqual;
  rdf::Term constant;  // always a numeric literal
  auto operator<=>(const CompareFilter&) const = default;
};

/// Substring-search regular expression; `flags` is empty or "i".
struct RegexFilter {
  Operand target;
  std::string pattern;
  std::string flags;
  auto operator<=>(const RegexFilter&) const = default;
};

using FilterExpr = std::variant<CompareFilter, RegexFilter>;

struct OrderBy {
  std::string variable;
  bool ascending = true;
  auto operator<=>(const OrderBy&) const = default;
};

struct QueryAst {
  rdf::PrefixMap prefixes;
  std::vector<std::string> projection;
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<OrderBy> order_by;
};

/// Variables mentioned by a filter.
std::string filter_variable(const FilterExpr& f);

/// Parses the supported subset:
///
///   PREFIX* SELECT ?var+ WHERE { (triples-block | FILTER)* } (ORDER BY ?var)?
///
/// Prefixes declared in the query override `known_prefixes`, which lets
/// query files omit the declarations a knowledge graph already carries.
QueryAst parse_query(std::string_view text,
                     const rdf::PrefixMap& known_prefixes = {});

}  // namespace tinykg::sparql
