// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tinykg/error.hpp"

namespace tinykg::deploy {

enum class State { kPending, kTransferring, kVerifying, kSucceeded, kFailed };

std::string_view to_string(State s);
std::optional<State> parse_state(std::string_view s);
bool is_terminal(State s);
/// Pending -> Transferring -> Verifying -> Succeeded, with Failed reachable
/// from every non-terminal state. Transferring may repeat to report progress.
bool is_allowed(State from, State to);

using Clock = std::chrono::system_clock;

/// "2026-10-14T09:30:00.125Z".
std::string format_timestamp(Clock::time_point t);
std::optional<Clock::time_point> parse_timestamp(std::string_view s);

struct Transition {
  State state = State::kPending;
  std::uint64_t bytes_sent = 0;  // meaningful for Transferring
  Clock::time_point at;
};

/// Outcome of one plan check, e.g. {"ram", false, "needs 116 kb, has 64 kb"}.
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// A transition that violates the state machine.
class StateError : public Error {
 public:
  using Error::Error;
};

struct DeploymentRecord {
  std::string id;
  std::string model;   // IRI
  std::string device;  // IRI
  std::uint64_t model_bytes = 0;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::vector<Transition> transitions;
  std::string reason;  // set when Failed

  State state() const;
  bool terminal() const { return is_terminal(state()); }
  /// Bytes reported by the most recent Transferring transition.
  std::uint64_t bytes_sent() const;

  /// Appends a transition; throws StateError when the move is not allowed.
  void advance(State next, std::uint64_t bytes = 0, Clock::time_point at = Clock::now());
  void fail(std::string why, Clock::time_point at = Clock::now());
};

nlohmann::json to_json(const DeploymentRecord& r);
/// Throws Error on a malformed object.
DeploymentRecord record_from_json(const nlohmann::json& j);

/// Append-only JSON-lines log. Each line is a full snapshot; the latest line
/// for an id is its current state. Appends are serialized by a mutex.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  void append(const DeploymentRecord& r);
  /// Latest snapshot per id. Lines that fail to parse are skipped.
  std::map<std::string, DeploymentRecord> load() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
};

}  // namespace tinykg::deploy
