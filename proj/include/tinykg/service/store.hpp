// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tinykg/error.hpp"
#include "tinykg/ontology/descriptors.hpp"
#include "tinykg/rdf/graph.hpp"

namespace tinykg::service {

/// An identifier is already taken.
class DuplicateError : public Error {
 public:
  using Error::Error;
};

/// The shared knowledge graph and its Turtle file. Readers share the graph;
/// a writer holds it exclusively and rewrites the file (temp file + rename)
/// before releasing it, so a completed write is on disk.
class KnowledgeStore {
 public:
  /// Loads `path` when it exists; an empty path keeps the graph in memory.
  explicit KnowledgeStore(std::filesystem::path path);

  void read(const std::function<void(const rdf::Graph&)>& fn) const;
  void write(const std::function<void(rdf::Graph&)>& fn);
  rdf::Graph snapshot() const;

  /// Throw DuplicateError when the identifier is present.
  void add_model(const ontology::ModelDescriptor& m);
  void add_device(const ontology::DeviceDescriptor& d);
  /// Merges a Turtle document.
  void ingest_turtle(std::string_view text);

  std::optional<ontology::ModelDescriptor> model(const std::string& uuid) const;
  std::optional<ontology::DeviceDescriptor> device(const std::string& device_id) const;
  /// Descriptors that can be rebuilt from the graph, sorted by identifier.
  std::vector<ontology::ModelDescriptor> models() const;
  std::vector<ontology::DeviceDescriptor> devices() const;
  std::string export_turtle() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  void persist_locked() const;

  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  rdf::Graph graph_;
};

/// Writes `bytes` to `path` through a sibling temp file and a rename.
void write_atomically(const std::filesystem::path& path, std::string_view bytes);

}  // namespace tinykg::service
