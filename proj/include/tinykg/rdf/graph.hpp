// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tinykg/rdf/term.hpp"

namespace tinykg::rdf {

/// Prefix short name (without the colon) to namespace IRI.
using PrefixMap = std::map<std::string, std::string>;

/// In-memory triple set with subject, predicate and object indexes.
///
/// Not internally synchronized: callers guard concurrent access (many
/// readers or one writer).
class Graph {
 public:
  Graph() = default;
  Graph(const Graph& other);
  Graph& operator=(const Graph& other);
  Graph(Graph&&) noexcept = default;
  Graph& operator=(Graph&&) noexcept = default;

  /// Returns true iff the triple was not yet present.
  /// Throws StructuralError for a literal subject or non-IRI predicate.
  bool insert(Triple t);
  bool insert(Term s, Term p, Term o) {
    return insert(Triple{std::move(s), std::move(p), std::move(o)});
  }
  bool contains(const Triple& t) const { return triples_.contains(t); }

  /// Triples agreeing with every bound position, in sorted order.
  std::vector<Triple> match(const std::optional<Term>& s,
                            const std::optional<Term>& p,
                            const std::optional<Term>& o) const;

  /// Visits matching triples without copying; order unspecified.
  void for_each_match(const Term* s, const Term* p, const Term* o,
                      const std::function<void(const Triple&)>& visit) const;

  /// Number of triples with the given term in the given position
  /// (0 = subject, 1 = predicate, 2 = object).
  std::size_t count_with(int position, const Term& term) const;

  /// First object of (s, p, *) in sorted order, if any.
  std::optional<Term> object_of(const Term& s, const Term& p) const;
  std::vector<Term> objects_of(const Term& s, const Term& p) const;
  std::vector<Term> subjects_of(const Term& p, const Term& o) const;

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const std::set<Triple>& triples() const { return triples_; }

  const PrefixMap& prefixes() const { return prefixes_; }
  /// Binds or rebinds `name` to `ns`.
  void bind_prefix(std::string name, std::string ns);

  /// A blank node whose label is not yet used in this graph.
  Term fresh_blank();

  /// Adds every triple of `other`, relabelling its blank nodes to fresh
  /// labels so they never collide with nodes already present. Prefixes of
  /// `other` are added when the short name is unbound here.
  void merge(const Graph& other);

 private:
  using Index = std::unordered_map<Term, std::vector<const Triple*>, TermHash>;

  void rebuild_indexes();
  void note_blank(const Term& t);

  std::set<Triple> triples_;
  Index by_subject_;
  Index by_predicate_;
  Index by_object_;
  PrefixMap prefixes_;
  std::unordered_set<std::string> blank_labels_;
  std::uint64_t next_blank_ = 0;
};

/// True iff the graphs are equal up to a bijective renaming of blank nodes.
/// Prefix bindings are ignored.
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace tinykg::rdf
