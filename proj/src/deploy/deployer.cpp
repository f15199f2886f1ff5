// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/deploy/deployer.hpp"

#include <algorithm>
#include <stdexcept>

#include "tinykg/ontology/mapping.hpp"
#include "tinykg/ontology/vocabulary.hpp"

namespace tinykg::deploy {

namespace vocab = ontology::vocab;

std::string Rejection::reason() const {
  std::string out = "rejected: ";
  bool first = true;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!first) out += ", ";
    out += c.name;
    first = false;
  }
  return out;
}

namespace {

rdf::Term require_node(const rdf::Graph& kg, const std::string& iri, const rdf::Term& type,
                       const char* what) {
  auto node = rdf::Term::iri(iri);
  if (!kg.contains({node, vocab::kType, type})) {
    throw NotFoundError(std::string(what) + " not found: " + iri);
  }
  return node;
}

Check memory_check(const char* name, Kilobytes need, Kilobytes have) {
  return {name, need <= have,
          "needs " + need.to_string() + " kb, device has " + have.to_string() + " kb"};
}

const ontology::Endpoint* pick_endpoint(const ontology::DeviceDescriptor& d) {
  for (const auto& e : d.endpoints) {
    if (e.protocol == "loopback") return &e;
  }
  return d.endpoints.empty() ? nullptr : &*d.endpoints.begin();
}

}  // namespace

std::variant<DeploymentPlan, Rejection> plan(const rdf::Graph& kg, const std::string& model_iri,
                                             const std::string& device_iri,
                                             std::uint64_t model_bytes, PlanOptions options) {
  auto model_node = require_node(kg, model_iri, vocab::kNeuralNetwork, "model");
  auto device_node = require_node(kg, device_iri, vocab::kSmartSensor, "device");
  auto m = ontology::triples_to_model(kg, model_node);
  auto d = ontology::triples_to_device(kg, device_node);

  std::vector<Check> checks;
  std::string missing;
  for (const auto& s : m.sensors) {
    if (d.sensors.count(s)) continue;
    missing += (missing.empty() ? "" : ", ") + s.name();
  }
  checks.push_back({"sensors", missing.empty(), missing.empty() ? "ok" : "missing " + missing});
  checks.push_back(memory_check("ram", m.min_ram_kb, d.ram_kb));
  checks.push_back(memory_check("flash", m.min_flash_kb, d.flash_kb));
  if (options.runtime) {
    checks.push_back({"runtime", m.runtime_platform == *options.runtime,
                      "model runs on '" + m.runtime_platform + "', requested '" +
                          *options.runtime + "'"});
  }
  Check size{"size", model_bytes <= d.flash_kb.bytes(),
             std::to_string(model_bytes) + " bytes, device flash holds " +
                 std::to_string(d.flash_kb.bytes())};
  checks.push_back(size);

  bool blocked = !size.passed;
  std::vector<std::string> warnings;
  for (const auto& c : checks) {
    if (c.passed || c.name == "size") continue;
    if (options.force) {
      warnings.push_back("forced: " + c.name + " (" + c.detail + ")");
    } else {
      blocked = true;
    }
  }
  if (blocked) return Rejection{model_iri, device_iri, std::move(checks)};
  return DeploymentPlan{model_iri, device_iri, model_bytes, std::move(checks),
                        std::move(warnings), std::move(d)};
}

DeploymentRecord execute(const DeploymentPlan& plan, std::span<const std::uint8_t> bytes,
                         Transport& transport, std::size_t chunk_size, const Observer& observer,
                         std::string id) {
  if (bytes.size() != plan.model_bytes) {
    throw std::invalid_argument("binary size does not match the plan");
  }
  if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");

  DeploymentRecord r;
  r.id = id.empty() ? ontology::generate_uuid() : std::move(id);
  r.model = plan.model_iri;
  r.device = plan.device_iri;
  r.model_bytes = plan.model_bytes;
  r.checks = plan.checks;
  r.warnings = plan.warnings;
  auto notify = [&] {
    if (observer) observer(r);
  };
  r.advance(State::kPending);
  notify();

  try {
    const auto* endpoint = pick_endpoint(plan.device);
    if (!endpoint) throw TransportError("transport: device has no endpoint");
    transport.open(*endpoint);
    r.advance(State::kTransferring, 0);
    notify();
    std::uint64_t sent = 0;
    while (sent < bytes.size()) {
      auto n = std::min<std::uint64_t>(chunk_size, bytes.size() - sent);
      transport.send_chunk(bytes.subspan(sent, n));
      sent += n;
      r.advance(State::kTransferring, sent);
      notify();
    }
    r.advance(State::kVerifying);
    notify();
    auto status = transport.finalize();
    if (status.bytes_received != bytes.size()) {
      r.fail("verification: device reported " + std::to_string(status.bytes_received) +
             " bytes, expected " + std::to_string(bytes.size()));
    } else if (status.crc32 != crc32(bytes)) {
      r.fail("verification: checksum mismatch");
    } else {
      r.advance(State::kSucceeded);
    }
  } catch (const std::exception& e) {
    if (!r.terminal()) r.fail(e.what());
  }
  notify();
  return r;
}

DeploymentRecord rejection_record(const Rejection& rej, std::uint64_t model_bytes) {
  DeploymentRecord r;
  r.id = ontology::generate_uuid();
  r.model = rej.model_iri;
  r.device = rej.device_iri;
  r.model_bytes = model_bytes;
  r.checks = rej.checks;
  r.advance(State::kPending);
  r.fail(rej.reason());
  return r;
}

Deployer::Deployer(RecordStore& store, TransportFactory factory, std::size_t chunk_size)
    : store_(store), factory_(std::move(factory)), chunk_size_(chunk_size) {
  for (auto& [id, r] : store_.load()) {
    if (!r.terminal()) {
      r.fail("interrupted");
      store_.append(r);
    }
    persisted_state_[id] = r.state();
    records_.emplace(id, std::move(r));
  }
}

Deployer::~Deployer() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void Deployer::observe(const DeploymentRecord& r) {
  std::lock_guard lock(mu_);
  records_.insert_or_assign(r.id, r);
  auto it = persisted_state_.find(r.id);
  if (it == persisted_state_.end() || it->second != r.state()) {
    store_.append(r);
    persisted_state_[r.id] = r.state();
  }
}

void Deployer::acquire(const std::string& device_iri) {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return !active_.count(device_iri); });
  active_.insert(device_iri);
}

void Deployer::release(const std::string& device_iri) {
  {
    std::lock_guard lock(mu_);
    active_.erase(device_iri);
  }
  cv_.notify_all();
}

DeploymentRecord Deployer::run_locked(const DeploymentPlan& plan,
                                      std::span<const std::uint8_t> bytes, std::string id) {
  std::unique_ptr<Transport> transport;
  std::string factory_error;
  try {
    transport = factory_(plan.device);
  } catch (const std::exception& e) {
    factory_error = e.what();
  }
  if (!transport) {
    DeploymentRecord r;
    r.id = id.empty() ? ontology::generate_uuid() : std::move(id);
    r.model = plan.model_iri;
    r.device = plan.device_iri;
    r.model_bytes = plan.model_bytes;
    r.checks = plan.checks;
    r.warnings = plan.warnings;
    r.advance(State::kPending);
    r.fail("transport: " + (factory_error.empty() ? "unavailable" : factory_error));
    observe(r);
    return r;
  }
  return execute(plan, bytes, *transport, chunk_size_,
                 [this](const DeploymentRecord& r) { observe(r); }, std::move(id));
}

DeploymentRecord Deployer::run(const DeploymentPlan& plan, std::span<const std::uint8_t> bytes) {
  acquire(plan.device_iri);
  try {
    auto r = run_locked(plan, bytes, {});
    release(plan.device_iri);
    return r;
  } catch (...) {
    release(plan.device_iri);
    throw;
  }
}

std::string Deployer::start(const DeploymentPlan& plan, std::vector<std::uint8_t> bytes) {
  if (bytes.size() != plan.model_bytes) {
    throw std::invalid_argument("binary size does not match the plan");
  }
  std::string id = ontology::generate_uuid();
  DeploymentRecord pending;
  pending.id = id;
  pending.model = plan.model_iri;
  pending.device = plan.device_iri;
  pending.model_bytes = plan.model_bytes;
  pending.checks = plan.checks;
  pending.warnings = plan.warnings;
  pending.advance(State::kPending);
  {
    std::lock_guard lock(mu_);
    if (active_.count(plan.device_iri)) {
      throw ConflictError("deployment already active for " + plan.device_iri);
    }
    active_.insert(plan.device_iri);
    records_.emplace(id, pending);
    ++running_;
  }
  try {
    store_.append(pending);
  } catch (...) {
    release(plan.device_iri);
    std::lock_guard lock(mu_);
    records_.erase(id);
    --running_;
    throw;
  }
  {
    std::lock_guard lock(mu_);
    persisted_state_[id] = State::kPending;
  }
  std::thread worker([this, plan, bytes = std::move(bytes), id] {
    run_locked(plan, bytes, id);
    release(plan.device_iri);
    {
      std::lock_guard lock(mu_);
      --running_;
    }
    cv_.notify_all();
  });
  std::lock_guard lock(mu_);
  workers_.push_back(std::move(worker));
  return id;
}

DeploymentRecord Deployer::reject(const Rejection& rej, std::uint64_t model_bytes) {
  auto r = rejection_record(rej, model_bytes);
  observe(r);
  return r;
}

std::vector<DeploymentRecord> Deployer::mass_deploy(const rdf::Graph& kg,
                                                    const std::string& model_iri,
                                                    const std::vector<std::string>& device_iris,
                                                    std::span<const std::uint8_t> bytes,
                                                    PlanOptions options) {
  std::vector<DeploymentRecord> out(device_iris.size());
  std::map<std::string, std::vector<std::size_t>> by_device;
  for (std::size_t i = 0; i < device_iris.size(); ++i) by_device[device_iris[i]].push_back(i);

  auto deploy_one = [&](std::size_t i) {
    const auto& device = device_iris[i];
    try {
      auto p = plan(kg, model_iri, device, bytes.size(), options);
      if (auto* rej = std::get_if<Rejection>(&p)) {
        out[i] = reject(*rej, bytes.size());
        return;
      }
      out[i] = run(std::get<DeploymentPlan>(p), bytes);
    } catch (const std::exception& e) {
      DeploymentRecord r;
      r.id = ontology::generate_uuid();
      r.model = model_iri;
      r.device = device;
      r.model_bytes = bytes.size();
      r.advance(State::kPending);
      r.fail(e.what());
      observe(r);
      out[i] = std::move(r);
    }
  };

  std::vector<std::thread> threads;
  for (const auto& [device, indices] : by_device) {
    threads.emplace_back([&deploy_one, &indices] {
      for (auto i : indices) deploy_one(i);
    });
  }
  for (auto& t : threads) t.join();
  return out;
}

std::optional<DeploymentRecord> Deployer::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<DeploymentRecord> Deployer::list() const {
  std::lock_guard lock(mu_);
  std::vector<DeploymentRecord> out;
  for (const auto& [id, r] : records_) out.push_back(r);
  return out;
}

bool Deployer::busy(const std::string& device_iri) const {
  std::lock_guard lock(mu_);
  return active_.count(device_iri) > 0;
}

void Deployer::wait_idle() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return running_ == 0; });
}

}  // namespace tinykg::deploy
