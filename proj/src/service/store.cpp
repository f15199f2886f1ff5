// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/service/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include <unistd.h>

#include "tinykg/ontology/mapping.hpp"
#include "tinykg/ontology/vocabulary.hpp"
#include "tinykg/rdf/turtle.hpp"

namespace tinykg::service {

namespace fs = std::filesystem;
namespace vocab = ontology::vocab;

void write_atomically(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

KnowledgeStore::KnowledgeStore(fs::path path) : path_(std::move(path)) {
  for (const auto& [name, ns] : vocab::standard_prefixes()) graph_.bind_prefix(name, ns);
  if (path_.empty() || !fs::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  graph_.merge(rdf::parse_turtle(text.str()));
}

void KnowledgeStore::read(const std::function<void(const rdf::Graph&)>& fn) const {
  std::shared_lock lock(mu_);
  fn(graph_);
}

void KnowledgeStore::write(const std::function<void(rdf::Graph&)>& fn) {
  std::unique_lock lock(mu_);
  rdf::Graph staged = graph_;
  fn(staged);
  std::swap(graph_, staged);
  try {
    persist_locked();
  } catch (...) {
    std::swap(graph_, staged);
    throw;
  }
}

rdf::Graph KnowledgeStore::snapshot() const {
  std::shared_lock lock(mu_);
  return graph_;
}

void KnowledgeStore::persist_locked() const {
  if (path_.empty()) return;
  write_atomically(path_, rdf::serialize_turtle(graph_));
}

void KnowledgeStore::add_model(const ontology::ModelDescriptor& m) {
  auto triples = ontology::model_to_triples(m);
  write([&](rdf::Graph& g) {
    if (g.contains({ontology::model_iri(m.identifier), vocab::kType, vocab::kNeuralNetwork})) {
      throw DuplicateError("model " + m.identifier + " already exists");
    }
    g.merge(triples);
  });
}

void KnowledgeStore::add_device(const ontology::DeviceDescriptor& d) {
  auto triples = ontology::device_to_triples(d);
  write([&](rdf::Graph& g) {
    for (const auto& node : ontology::device_nodes(g)) {
      auto id = g.object_of(node, vocab::kIdentifier);
      if (node == ontology::device_iri(d.device_id) || (id && id->value() == d.device_id)) {
        throw DuplicateError("device " + d.device_id + " already exists");
      }
    }
    g.merge(triples);
  });
}

void KnowledgeStore::ingest_turtle(std::string_view text) {
  auto parsed = rdf::parse_turtle(text);
  write([&](rdf::Graph& g) { g.merge(parsed); });
}

std::optional<ontology::ModelDescriptor> KnowledgeStore::model(const std::string& uuid) const {
  if (!ontology::is_uuid(uuid)) return std::nullopt;
  std::shared_lock lock(mu_);
  auto node = ontology::model_iri(uuid);
  if (!graph_.contains({node, vocab::kType, vocab::kNeuralNetwork})) return std::nullopt;
  return ontology::triples_to_model(graph_, node);
}

std::optional<ontology::DeviceDescriptor> KnowledgeStore::device(
    const std::string& device_id) const {
  if (!ontology::is_device_id(device_id)) return std::nullopt;
  std::shared_lock lock(mu_);
  auto node = ontology::device_iri(device_id);
  if (!graph_.contains({node, vocab::kType, vocab::kSmartSensor})) return std::nullopt;
  return ontology::triples_to_device(graph_, node);
}

std::vector<ontology::ModelDescriptor> KnowledgeStore::models() const {
  std::shared_lock lock(mu_);
  std::vector<ontology::ModelDescriptor> out;
  for (const auto& node : ontology::model_nodes(graph_)) {
    try {
      out.push_back(ontology::triples_to_model(graph_, node));
    } catch (const Error&) {
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.identifier < b.identifier; });
  return out;
}

std::vector<ontology::DeviceDescriptor> KnowledgeStore::devices() const {
  std::shared_lock lock(mu_);
  std::vector<ontology::DeviceDescriptor> out;
  for (const auto& node : ontology::device_nodes(graph_)) {
    try {
      out.push_back(ontology::triples_to_device(graph_, node));
    } catch (const Error&) {
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.device_id < b.device_id; });
  return out;
}

std::string KnowledgeStore::export_turtle() const {
  std::shared_lock lock(mu_);
  return rdf::serialize_turtle(graph_);
}

}  // namespace tinykg::service
