// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "tinykg/error.hpp"
#include "tinykg/match/matchmaker.hpp"
#include "tinykg/rdf/term.hpp"
#include "tinykg/sparql/evaluator.hpp"

namespace tinykg::deploy {
class Deployer;
}

namespace tinykg::service {

class KnowledgeStore;

/// Error payload returned by every failing endpoint.
class ApiError : public Error {
 public:
  enum class Code {
    kBadRequest,       // 400
    kMalformedModel,   // 400
    kQueryError,       // 400
    kNotFound,         // 404
    kConflict,         // 409
    kValidationFailed, // 422
    kPlanRejected,     // 422
    kInternal,         // 500
  };

  ApiError(Code code, std::string message, nlohmann::json detail = nullptr);

  Code code() const { return code_; }
  int status() const;
  std::string_view code_name() const;
  const nlohmann::json& detail() const { return detail_; }
  /// {"status", "code", "message", "detail"?}
  nlohmann::json to_json() const;

 private:
  Code code_;
  nlohmann::json detail_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path kg_path = "tinykg.ttl";
  std::filesystem::path deployments_path = "deployments.jsonl";
  std::filesystem::path loopback_root = "loopback";
  std::filesystem::path models_dir = "models";
  std::string cors_origin = "*";
};

/// Applies TINYKG_BIND ("host:port"), TINYKG_KG, TINYKG_DEPLOYMENTS,
/// TINYKG_LOOPBACK, TINYKG_MODELS and TINYKG_CORS when set.
ServerConfig apply_environment(ServerConfig config);

/// {"type": "uri"|"bnode"|"literal", "value", "datatype"?, "xml:lang"?}
nlohmann::json term_json(const rdf::Term& t);
/// {"vars": [...], "rows": [[term_json...]...]}
nlohmann::json solution_json(const sparql::Solution& s);
/// {"subject": IRI, <column>: value...}; numeric literals become numbers.
nlohmann::json match_row_json(const match::MatchRow& row);

/// The HTTP service. Handlers run concurrently on the server's pool.
class Service {
 public:
  explicit Service(ServerConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the configured address and returns the port, or throws.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();

  KnowledgeStore& store();
  deploy::Deployer& deployer();
  const ServerConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tinykg::service
