// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tinykg/deploy/record.hpp"
#include "tinykg/deploy/transport.hpp"
#include "tinykg/ontology/descriptors.hpp"
#include "tinykg/rdf/graph.hpp"

namespace tinykg::deploy {

inline constexpr std::size_t kDefaultChunkSize = 1024;

/// An IRI that does not name a model or device in the graph.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Ready-to-run deployment. With `force`, failed compatibility checks stay
/// in `checks` and are echoed in `warnings`.
struct DeploymentPlan {
  std::string model_iri;
  std::string device_iri;
  std::uint64_t model_bytes = 0;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  ontology::DeviceDescriptor device;
};

struct Rejection {
  std::string model_iri;
  std::string device_iri;
  std::vector<Check> checks;
  /// "rejected: ram, flash"
  std::string reason() const;
};

struct PlanOptions {
  bool force = false;
  std::optional<std::string> runtime;  // adds a runtime equality check
};

/// Checks sensors, ram, flash, runtime (when requested) and size. `force`
/// overrides every check except size: a binary larger than the device's
/// flash cannot be stored at all.
std::variant<DeploymentPlan, Rejection> plan(const rdf::Graph& kg, const std::string& model_iri,
                                             const std::string& device_iri,
                                             std::uint64_t model_bytes, PlanOptions options = {});

using Observer = std::function<void(const DeploymentRecord&)>;

/// Streams `bytes` through `transport` and verifies the device's size and
/// CRC-32. Every failure ends in a Failed record; nothing escapes except
/// std::invalid_argument when `bytes` does not match the plan.
/// `observer` sees the record after each transition.
DeploymentRecord execute(const DeploymentPlan& plan, std::span<const std::uint8_t> bytes,
                         Transport& transport, std::size_t chunk_size = kDefaultChunkSize,
                         const Observer& observer = {}, std::string id = {});

/// A Pending -> Failed("rejected: ...") record for a plan that was refused.
DeploymentRecord rejection_record(const Rejection& r, std::uint64_t model_bytes);

using TransportFactory =
    std::function<std::unique_ptr<Transport>(const ontology::DeviceDescriptor&)>;

/// Another deployment to the same device is still running.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Runs deployments, at most one per device at a time, and persists each
/// state change to the record store.
class Deployer {
 public:
  Deployer(RecordStore& store, TransportFactory factory,
           std::size_t chunk_size = kDefaultChunkSize);
  ~Deployer();

  Deployer(const Deployer&) = delete;
  Deployer& operator=(const Deployer&) = delete;

  /// Blocks until the device is free, then deploys synchronously.
  DeploymentRecord run(const DeploymentPlan& plan, std::span<const std::uint8_t> bytes);

  /// Persists a Pending record, starts the deployment in the background and
  /// returns its id. Throws ConflictError when the device is busy.
  std::string start(const DeploymentPlan& plan, std::vector<std::uint8_t> bytes);

  /// Records a rejected plan as a Failed record.
  DeploymentRecord reject(const Rejection& r, std::uint64_t model_bytes);

  /// Plans every target; distinct devices deploy concurrently, repeats of a
  /// device run one after another. Results follow `device_iris` order.
  std::vector<DeploymentRecord> mass_deploy(const rdf::Graph& kg, const std::string& model_iri,
                                            const std::vector<std::string>& device_iris,
                                            std::span<const std::uint8_t> bytes,
                                            PlanOptions options = {});

  std::optional<DeploymentRecord> get(const std::string& id) const;
  std::vector<DeploymentRecord> list() const;
  bool busy(const std::string& device_iri) const;
  /// Waits for every background deployment to finish.
  void wait_idle();

 private:
  void acquire(const std::string& device_iri);
  void release(const std::string& device_iri);
  DeploymentRecord run_locked(const DeploymentPlan& plan, std::span<const std::uint8_t> bytes,
                              std::string id);
  void observe(const DeploymentRecord& r);

  RecordStore& store_;
  TransportFactory factory_;
  std::size_t chunk_size_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::set<std::string> active_;
  std::map<std::string, DeploymentRecord> records_;
  std::map<std::string, State> persisted_state_;
  std::vector<std::thread> workers_;
  std::size_t running_ = 0;
};

}  // namespace tinykg::deploy
