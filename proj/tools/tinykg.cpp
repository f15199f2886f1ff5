// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: describe, ingest, query, match, deploy, serve,
// export. Exit codes: 0 ok, 1 runtime failure, 2 query rejected by the
// parser, 3 some deployment did not succeed; usage errors use CLI11's codes.

#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tinykg/deploy/deployer.hpp"
#include "tinykg/match/matchmaker.hpp"
#include "tinykg/model/describe.hpp"
#include "tinykg/model/model_graph.hpp"
#include "tinykg/ontology/json.hpp"
#include "tinykg/ontology/mapping.hpp"
#include "tinykg/ontology/vocabulary.hpp"
#include "tinykg/rdf/turtle.hpp"
#include "tinykg/service/api.hpp"
#include "tinykg/service/store.hpp"
#include "tinykg/sparql/evaluator.hpp"
#include "tinykg/sparql/query.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tinykg;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cell(const rdf::Term& t) {
  if (t.is_blank()) return "_:" + t.value();
  return t.value();
}

void print_rows(const std::vector<match::MatchRow>& rows, std::ostream& out) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows[0].columns.size(); ++i) {
    out << (i ? "\t" : "") << rows[0].columns[i].first;
  }
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      out << (i ? "\t" : "") << cell(r.columns[i].second);
    }
    out << "\n";
  }
}

ontology::Sidecar read_sidecar(const std::string& path) {
  if (path.empty()) return {};
  auto j = nlohmann::json::parse(slurp(path), nullptr, false);
  if (j.is_discarded()) throw Error(path + ": not valid JSON");
  return ontology::parse_sidecar(j);
}

ontology::ModelDescriptor describe_file(const std::string& model, const std::string& sidecar) {
  return model::describe(model::read_model_file(model), read_sidecar(sidecar));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tinykg: TinyML model and device knowledge graph"};
  app.require_subcommand(1);
  std::string kg_path = std::getenv("TINYKG_KG") ? std::getenv("TINYKG_KG") : "tinykg.ttl";
  app.add_option("--kg", kg_path, "Turtle knowledge graph file")->capture_default_str();

  auto* describe = app.add_subcommand("describe", "Describe a .tflite model as Turtle");
  std::string model_path, sidecar_path, out_path;
  describe->add_option("model", model_path, "Model binary")->required();
  describe->add_option("--sidecar", sidecar_path, "Metadata JSON");
  describe->add_option("-o,--out", out_path, "Output file (default stdout)");

  auto* ingest = app.add_subcommand("ingest", "Add models, device manifests or Turtle to the KG");
  std::vector<std::string> inputs;
  std::string ingest_sidecar;
  ingest->add_option("files", inputs, ".tflite, .json manifest or .ttl files")->required();
  ingest->add_option("--sidecar", ingest_sidecar, "Metadata JSON for a single .tflite input");

  auto* query = app.add_subcommand("query", "Run a SPARQL query file against the KG");
  std::string query_path;
  query->add_option("query", query_path, "Query file")->required();

  auto* match = app.add_subcommand("match", "Compatible models for a device, or devices for a model");
  std::string match_device, match_model;
  auto* by_device = match->add_option("--device", match_device, "Device id");
  auto* by_model = match->add_option("--model", match_model, "Model UUID");
  by_device->excludes(by_model);
  match->require_option(1);

  auto* deploy_cmd = app.add_subcommand("deploy", "Deploy a model binary to one or more devices");
  std::string dep_model, dep_binary, dep_records = "deployments.jsonl", dep_loopback = "loopback";
  std::vector<std::string> dep_devices;
  bool dep_force = false;
  deploy_cmd->add_option("--model", dep_model, "Model UUID")->required();
  deploy_cmd->add_option("--device", dep_devices, "Device id (repeatable)")->required();
  deploy_cmd->add_option("--binary", dep_binary, "Model binary")->required();
  deploy_cmd->add_flag("--force", dep_force, "Override compatibility checks");
  deploy_cmd->add_option("--records", dep_records, "Deployment log")->capture_default_str();
  deploy_cmd->add_option("--loopback", dep_loopback, "Loopback device root")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string bind = "127.0.0.1:8080";
  serve->add_option("--bind", bind, "host:port")->capture_default_str();

  auto* export_cmd = app.add_subcommand("export", "Write the KG as Turtle");
  std::string export_out;
  export_cmd->add_option("-o,--out", export_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*describe) {
      auto turtle = rdf::serialize_turtle(
          ontology::model_to_triples(describe_file(model_path, sidecar_path)));
      if (out_path.empty()) {
        std::cout << turtle;
      } else {
        service::write_atomically(out_path, turtle);
      }
      return 0;
    }

    if (*ingest) {
      service::KnowledgeStore store(kg_path);
      for (const auto& f : inputs) {
        auto ext = fs::path(f).extension().string();
        if (ext == ".ttl") {
          store.ingest_turtle(slurp(f));
        } else if (ext == ".json") {
          auto j = nlohmann::json::parse(slurp(f), nullptr, false);
          if (j.is_discarded()) throw Error(f + ": not valid JSON");
          store.add_device(ontology::parse_device_manifest(j));
        } else {
          auto m = describe_file(f, inputs.size() == 1 ? ingest_sidecar : "");
          store.add_model(m);
          std::cout << m.identifier << "\n";
        }
      }
      return 0;
    }

    if (*query) {
      service::KnowledgeStore store(kg_path);
      auto g = store.snapshot();
      auto prefixes = ontology::vocab::standard_prefixes();
      for (const auto& [k, v] : g.prefixes()) prefixes[k] = v;
      sparql::QueryAst ast;
      try {
        ast = sparql::parse_query(slurp(query_path), prefixes);
      } catch (const sparql::QueryError& e) {
        std::cerr << query_path << ": " << e.what() << "\n";
        return 2;
      }
      auto sol = sparql::evaluate(ast, g);
      for (std::size_t i = 0; i < sol.variables.size(); ++i) {
        std::cout << (i ? "\t" : "") << sol.variables[i];
      }
      std::cout << "\n";
      for (const auto& row : sol.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "\t" : "") << cell(row[i]);
        std::cout << "\n";
      }
      return 0;
    }

    if (*match) {
      service::KnowledgeStore store(kg_path);
      auto g = store.snapshot();
      if (!match_device.empty()) {
        auto d = store.device(match_device);
        if (!d) throw Error("no device " + match_device);
        print_rows(match::models_for_device(g, match::capabilities(*d)), std::cout);
      } else {
        auto m = store.model(match_model);
        if (!m) throw Error("no model " + match_model);
        print_rows(match::devices_for_model(g, match::requirements(*m)), std::cout);
      }
      return 0;
    }

    if (*deploy_cmd) {
      service::KnowledgeStore store(kg_path);
      auto g = store.snapshot();
      auto bin = slurp(dep_binary);
      std::vector<std::uint8_t> bytes(bin.begin(), bin.end());
      deploy::RecordStore records(dep_records);
      deploy::Deployer deployer(records, [&](const ontology::DeviceDescriptor& d) {
        return std::make_unique<deploy::LoopbackTransport>(dep_loopback, d.flash_kb.bytes());
      });
      std::vector<std::string> iris;
      for (const auto& d : dep_devices) iris.push_back(ontology::device_iri(d).value());
      auto out = deployer.mass_deploy(g, ontology::model_iri(dep_model).value(), iris, bytes,
                                      {dep_force, {}});
      bool all_ok = true;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& r = out[i];
        std::cout << dep_devices[i] << "\t" << deploy::to_string(r.state());
        if (!r.reason.empty()) std::cout << "\t" << r.reason;
        std::cout << "\n";
        all_ok = all_ok && r.state() == deploy::State::kSucceeded;
      }
      return all_ok ? 0 : 3;
    }

    if (*serve) {
      auto config = service::apply_environment({});
      if (serve->count("--bind")) {
        auto colon = bind.rfind(':');
        if (colon == std::string::npos) throw Error("--bind expects host:port");
        config.host = bind.substr(0, colon);
        config.port = std::stoi(bind.substr(colon + 1));
      }
      if (app.count("--kg")) config.kg_path = kg_path;
      // Signals are taken synchronously by a waiter thread; the server's
      // worker threads inherit the blocked mask.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      service::Service svc(config);
      int port = svc.bind();
      std::cerr << "listening on " << config.host << ":" << port << "\n";
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        svc.stop();
      });
      waiter.detach();
      svc.run();
      return 0;
    }

    if (*export_cmd) {
      service::KnowledgeStore store(kg_path);
      if (export_out.empty()) {
        std::cout << store.export_turtle();
      } else {
        service::write_atomically(export_out, store.export_turtle());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
