// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/service/api.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <httplib.h>

#include "tinykg/deploy/deployer.hpp"
#include "tinykg/model/analysis.hpp"
#include "tinykg/model/describe.hpp"
#include "tinykg/model/flatbuffer.hpp"
#include "tinykg/model/model_graph.hpp"
#include "tinykg/ontology/json.hpp"
#include "tinykg/ontology/mapping.hpp"
#include "tinykg/ontology/vocabulary.hpp"
#include "tinykg/rdf/turtle.hpp"
#include "tinykg/service/store.hpp"
#include "tinykg/sparql/query.hpp"

namespace tinykg::service {

namespace fs = std::filesystem;
namespace vocab = ontology::vocab;
using json = nlohmann::json;
using Code = ApiError::Code;

ApiError::ApiError(Code code, std::string message, json detail)
    : Error(std::move(message)), code_(code), detail_(std::move(detail)) {}

int ApiError::status() const {
  switch (code_) {
    case Code::kBadRequest:
    case Code::kMalformedModel:
    case Code::kQueryError: return 400;
    case Code::kNotFound: return 404;
    case Code::kConflict: return 409;
    case Code::kValidationFailed:
    case Code::kPlanRejected: return 422;
    case Code::kInternal: return 500;
  }
  return 500;
}

std::string_view ApiError::code_name() const {
  switch (code_) {
    case Code::kBadRequest: return "bad_request";
    case Code::kMalformedModel: return "malformed_model";
    case Code::kQueryError: return "query_error";
    case Code::kNotFound: return "not_found";
    case Code::kConflict: return "conflict";
    case Code::kValidationFailed: return "validation_failed";
    case Code::kPlanRejected: return "plan_rejected";
    case Code::kInternal: return "internal";
  }
  return "internal";
}

json ApiError::to_json() const {
  json j = {{"status", status()}, {"code", std::string(code_name())}, {"message", what()}};
  if (!detail_.is_null()) j["detail"] = detail_;
  return j;
}

ServerConfig apply_environment(ServerConfig c) {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (auto bind = env("TINYKG_BIND")) {
    auto colon = bind->rfind(':');
    std::string host = colon == std::string::npos ? "" : bind->substr(0, colon);
    std::string port = colon == std::string::npos ? *bind : bind->substr(colon + 1);
    if (!host.empty()) c.host = host;
    try {
      c.port = std::stoi(port);
    } catch (const std::exception&) {
      throw Error("TINYKG_BIND: bad port '" + port + "'");
    }
  }
  if (auto v = env("TINYKG_KG")) c.kg_path = *v;
  if (auto v = env("TINYKG_DEPLOYMENTS")) c.deployments_path = *v;
  if (auto v = env("TINYKG_LOOPBACK")) c.loopback_root = *v;
  if (auto v = env("TINYKG_MODELS")) c.models_dir = *v;
  if (auto v = env("TINYKG_CORS")) c.cors_origin = *v;
  return c;
}

json term_json(const rdf::Term& t) {
  if (t.is_iri()) return {{"type", "uri"}, {"value", t.value()}};
  if (t.is_blank()) return {{"type", "bnode"}, {"value", t.value()}};
  json j = {{"type", "literal"}, {"value", t.value()}};
  if (!t.language().empty()) {
    j["xml:lang"] = t.language();
  } else {
    j["datatype"] = t.datatype();
  }
  return j;
}

json solution_json(const sparql::Solution& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row = json::array();
    for (const auto& t : r) row.push_back(term_json(t));
    rows.push_back(std::move(row));
  }
  return {{"vars", s.variables}, {"rows", std::move(rows)}};
}

namespace {

json value_json(const rdf::Term& t) {
  if (t.is_literal() && t.is_numeric()) {
    const auto& lex = t.value();
    if (t.datatype() == rdf::xsd::kInteger) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(lex, &used);
        if (used == lex.size()) return v;
      } catch (const std::exception&) {
      }
    }
    char* end = nullptr;
    double d = std::strtod(lex.c_str(), &end);
    if (end && *end == '\0') return d;
  }
  return t.value();
}

}  // namespace

json match_row_json(const match::MatchRow& row) {
  json j = {{"subject", row.subject.value()}};
  for (const auto& [name, value] : row.columns) j[name] = value_json(value);
  return j;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_body(const httplib::Request& req) {
  auto j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw ApiError(Code::kBadRequest, "request body is not valid JSON");
  return j;
}

json validation_detail(const ontology::ValidationError& e) { return {{"fields", e.fields()}}; }

// Accepts a bare identifier or the full IRI.
std::string model_iri_of(const std::string& ref) {
  if (ref.find("://") != std::string::npos) return ref;
  return ontology::model_iri(ref).value();
}

std::string device_iri_of(const std::string& ref) {
  if (ref.find("://") != std::string::npos) return ref;
  return ontology::device_iri(ref).value();
}

std::string model_uuid_of(const std::string& iri) {
  if (iri.rfind(vocab::kModelBase, 0) == 0) return iri.substr(vocab::kModelBase.size());
  return {};
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServerConfig c)
      : config(std::move(c)),
        store(config.kg_path),
        records(config.deployments_path),
        deployer(records, [root = config.loopback_root](const ontology::DeviceDescriptor& d) {
          return std::make_unique<deploy::LoopbackTransport>(root, d.flash_kb.bytes());
        }) {
    fs::create_directories(config.models_dir);
    routes();
  }

  ServerConfig config;
  KnowledgeStore store;
  deploy::RecordStore records;
  deploy::Deployer deployer;
  httplib::Server server;
  int bound_port = -1;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, const ApiError& e) {
    send_json(res, e.status(), e.to_json());
  }

  // Maps library exceptions to API errors; anything unexpected is a 500.
  static Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const ApiError& e) {
        send_error(res, e);
      } catch (const model::MalformedFileError& e) {
        send_error(res, ApiError(Code::kMalformedModel, e.what()));
      } catch (const model::AnalysisError& e) {
        send_error(res, ApiError(Code::kMalformedModel, e.what()));
      } catch (const sparql::QuerySyntaxError& e) {
        send_error(res, ApiError(Code::kQueryError, e.what(),
                                 {{"line", e.line()}, {"column", e.column()}}));
      } catch (const sparql::QueryError& e) {
        send_error(res, ApiError(Code::kQueryError, e.what()));
      } catch (const ontology::ValidationError& e) {
        send_error(res, ApiError(Code::kValidationFailed, e.what(), validation_detail(e)));
      } catch (const DuplicateError& e) {
        send_error(res, ApiError(Code::kConflict, e.what()));
      } catch (const deploy::ConflictError& e) {
        send_error(res, ApiError(Code::kConflict, e.what()));
      } catch (const deploy::NotFoundError& e) {
        send_error(res, ApiError(Code::kNotFound, e.what()));
      } catch (const std::exception& e) {
        send_error(res, ApiError(Code::kInternal, e.what()));
      }
    };
  }

  void get(const std::string& pattern, Handler h) { server.Get(pattern, guarded(std::move(h))); }
  void post(const std::string& pattern, Handler h) {
    server.Post(pattern, guarded(std::move(h)));
  }

  ontology::ModelDescriptor require_model(const std::string& uuid) const {
    auto m = store.model(uuid);
    if (!m) throw ApiError(Code::kNotFound, "no model " + uuid);
    return *m;
  }

  ontology::DeviceDescriptor require_device(const std::string& id) const {
    auto d = store.device(id);
    if (!d) throw ApiError(Code::kNotFound, "no device " + id);
    return *d;
  }

  fs::path binary_path(const std::string& uuid) const {
    return config.models_dir / (uuid + ".tflite");
  }

  void routes() {
    server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", config.cors_origin);
    });
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      send_error(res, ApiError(res.status == 404 ? Code::kNotFound : Code::kBadRequest,
                               "no route for " + req.method + " " + req.path));
      return httplib::Server::HandlerResponse::Handled;
    });

    get("/devices", [this](const auto&, auto& res) {
      json out = json::array();
      for (const auto& d : store.devices()) out.push_back(ontology::to_json(d));
      send_json(res, 200, out);
    });
    get(R"(/devices/([^/]+))", [this](const auto& req, auto& res) {
      send_json(res, 200, ontology::to_json(require_device(req.matches[1])));
    });
    get("/models", [this](const auto&, auto& res) {
      json out = json::array();
      for (const auto& m : store.models()) out.push_back(ontology::to_json(m));
      send_json(res, 200, out);
    });
    get(R"(/models/([^/]+))", [this](const auto& req, auto& res) {
      send_json(res, 200, ontology::to_json(require_model(req.matches[1])));
    });
    post("/models", [this](const auto& req, auto& res) { post_model(req, res); });
    post("/devices", [this](const auto& req, auto& res) {
      auto d = ontology::parse_device_manifest(parse_body(req));
      store.add_device(d);
      send_json(res, 201, ontology::to_json(d));
    });
    post("/query", [this](const auto& req, auto& res) {
      auto g = store.snapshot();
      auto ast = sparql::parse_query(req.body, g.prefixes());
      send_json(res, 200, solution_json(sparql::evaluate(ast, g)));
    });
    get("/match/models", [this](const auto& req, auto& res) {
      if (!req.has_param("device")) throw ApiError(Code::kBadRequest, "missing ?device=");
      auto d = require_device(req.get_param_value("device"));
      json out = json::array();
      store.read([&](const rdf::Graph& g) {
        for (const auto& row : match::models_for_device(g, match::capabilities(d))) {
          out.push_back(match_row_json(row));
        }
      });
      send_json(res, 200, out);
    });
    get("/match/devices", [this](const auto& req, auto& res) {
      if (!req.has_param("model")) throw ApiError(Code::kBadRequest, "missing ?model=");
      auto m = require_model(req.get_param_value("model"));
      json out = json::array();
      store.read([&](const rdf::Graph& g) {
        for (const auto& row : match::devices_for_model(g, match::requirements(m))) {
          out.push_back(match_row_json(row));
        }
      });
      send_json(res, 200, out);
    });
    post("/deployments", [this](const auto& req, auto& res) { post_deployment(req, res); });
    get("/deployments", [this](const auto&, auto& res) {
      json out = json::array();
      for (const auto& r : deployer.list()) out.push_back(deploy::to_json(r));
      send_json(res, 200, out);
    });
    get(R"(/deployments/([^/]+))", [this](const auto& req, auto& res) {
      auto r = deployer.get(req.matches[1]);
      if (!r) throw ApiError(Code::kNotFound, "no deployment " + std::string(req.matches[1]));
      send_json(res, 200, deploy::to_json(*r));
    });
    get("/kg.ttl", [this](const auto&, auto& res) {
      res.set_content(store.export_turtle(), "text/turtle");
    });
  }

  void post_model(const httplib::Request& req, httplib::Response& res) {
    std::string binary;
    ontology::Sidecar sidecar;
    if (req.is_multipart_form_data()) {
      if (!req.has_file("model")) throw ApiError(Code::kBadRequest, "missing 'model' part");
      binary = req.get_file_value("model").content;
      if (req.has_file("sidecar")) {
        auto j = json::parse(req.get_file_value("sidecar").content, nullptr, false);
        if (j.is_discarded()) throw ApiError(Code::kBadRequest, "sidecar is not valid JSON");
        sidecar = ontology::parse_sidecar(j);
      }
    } else {
      binary = req.body;
    }
    if (binary.empty()) throw ApiError(Code::kBadRequest, "empty model binary");
    std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(binary.data()),
                                        binary.size());
    auto m = model::describe(model::read_model(bytes), sidecar);
    if (store.model(m.identifier)) {
      throw ApiError(Code::kConflict, "model " + m.identifier + " already exists");
    }
    write_atomically(binary_path(m.identifier), binary);
    store.add_model(m);
    send_json(res, 201, ontology::to_json(m));
  }

  void post_deployment(const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body.is_object() || !body.contains("model") || !body.contains("device") ||
        !body["model"].is_string() || !body["device"].is_string()) {
      throw ApiError(Code::kBadRequest, "expected {\"model\": ..., \"device\": ...}");
    }
    bool force = false;
    if (body.contains("force")) {
      if (!body["force"].is_boolean()) throw ApiError(Code::kBadRequest, "force must be boolean");
      force = body["force"].get<bool>();
    }
    auto model_iri = model_iri_of(body["model"].get<std::string>());
    auto device_iri = device_iri_of(body["device"].get<std::string>());

    store.read([&](const rdf::Graph& g) {
      if (!g.contains({rdf::Term::iri(model_iri), vocab::kType, vocab::kNeuralNetwork})) {
        throw ApiError(Code::kNotFound, "no model " + model_iri);
      }
      if (!g.contains({rdf::Term::iri(device_iri), vocab::kType, vocab::kSmartSensor})) {
        throw ApiError(Code::kNotFound, "no device " + device_iri);
      }
    });
    auto path = binary_path(model_uuid_of(model_iri));
    if (model_uuid_of(model_iri).empty() || !fs::exists(path)) {
      throw ApiError(Code::kNotFound, "no binary stored for " + model_iri);
    }
    auto binary = read_file(path);
    std::variant<deploy::DeploymentPlan, deploy::Rejection> planned;
    store.read([&](const rdf::Graph& g) {
      planned = deploy::plan(g, model_iri, device_iri, binary.size(), {force, {}});
    });
    if (auto* rej = std::get_if<deploy::Rejection>(&planned)) {
      json checks = json::array();
      for (const auto& c : rej->checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      }
      throw ApiError(Code::kPlanRejected, rej->reason(), {{"checks", checks}});
    }
    const auto& plan = std::get<deploy::DeploymentPlan>(planned);
    std::vector<std::uint8_t> bytes(binary.begin(), binary.end());
    auto id = deployer.start(plan, std::move(bytes));
    send_json(res, 201, deploy::to_json(*deployer.get(id)));
  }
};

Service::Service(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() {
  stop();
  impl_->deployer.wait_idle();
}

int Service::bind() {
  int port = impl_->config.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->config.host);
  } else if (!impl_->server.bind_to_port(impl_->config.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error("cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  }
  impl_->bound_port = port;
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

KnowledgeStore& Service::store() { return impl_->store; }
deploy::Deployer& Service::deployer() { return impl_->deployer; }
const ServerConfig& Service::config() const { return impl_->config; }

}  // namespace tinykg::service
