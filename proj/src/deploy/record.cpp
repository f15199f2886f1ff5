// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/deploy/record.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

namespace tinykg::deploy {

std::string_view to_string(State s) {
  switch (s) {
    case State::kPending: return "Pending";
    case State::kTransferring: return "Transferring";
    case State::kVerifying: return "Verifying";
    case State::kSucceeded: return "Succeeded";
    case State::kFailed: return "Failed";
  }
  return "Pending";
}

std::optional<State> parse_state(std::string_view s) {
  for (State st : {State::kPending, State::kTransferring, State::kVerifying, State::kSucceeded,
                   State::kFailed}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

bool is_terminal(State s) { return s == State::kSucceeded || s == State::kFailed; }

bool is_allowed(State from, State to) {
  if (is_terminal(from)) return false;
  if (to == State::kFailed) return true;
  switch (from) {
    case State::kPending: return to == State::kTransferring;
    case State::kTransferring: return to == State::kTransferring || to == State::kVerifying;
    case State::kVerifying: return to == State::kSucceeded;
    default: return false;
  }
}

std::string format_timestamp(Clock::time_point t) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  long frac = static_cast<long>(ms % 1000);
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03ldZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
  return buf;
}

std::optional<Clock::time_point> parse_timestamp(std::string_view s) {
  std::tm tm{};
  int ms = 0, consumed = 0;
  std::string text(s);
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ%n", &tm.tm_year, &tm.tm_mon,
                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms, &consumed) != 7 ||
      static_cast<std::size_t>(consumed) != text.size()) {
    return std::nullopt;
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  std::time_t secs = timegm(&tm);
  return Clock::time_point(std::chrono::seconds(secs)) + std::chrono::milliseconds(ms);
}

State DeploymentRecord::state() const {
  return transitions.empty() ? State::kPending : transitions.back().state;
}

std::uint64_t DeploymentRecord::bytes_sent() const {
  for (auto it = transitions.rbegin(); it != transitions.rend(); ++it) {
    if (it->state == State::kTransferring) return it->bytes_sent;
  }
  return 0;
}

void DeploymentRecord::advance(State next, std::uint64_t bytes, Clock::time_point at) {
  if (transitions.empty()) {
    if (next != State::kPending) throw StateError("a record starts Pending");
  } else if (!is_allowed(state(), next)) {
    throw StateError("illegal transition " + std::string(to_string(state())) + " -> " +
                     std::string(to_string(next)));
  } else if (next == State::kTransferring && state() == State::kTransferring &&
             bytes < bytes_sent()) {
    throw StateError("transfer progress went backwards");
  }
  transitions.push_back({next, bytes, at});
}

void DeploymentRecord::fail(std::string why, Clock::time_point at) {
  advance(State::kFailed, 0, at);
  reason = std::move(why);
}

nlohmann::json to_json(const DeploymentRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["model"] = r.model;
  j["device"] = r.device;
  j["state"] = std::string(to_string(r.state()));
  j["reason"] = r.reason;
  j["model_bytes"] = r.model_bytes;
  j["bytes_sent"] = r.bytes_sent();
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["warnings"] = r.warnings;
  auto& ts = j["timestamps"] = nlohmann::json::array();
  for (const auto& t : r.transitions) {
    nlohmann::json e = {{"state", std::string(to_string(t.state))}, {"at", format_timestamp(t.at)}};
    if (t.state == State::kTransferring) e["bytes_sent"] = t.bytes_sent;
    ts.push_back(std::move(e));
  }
  return j;
}

DeploymentRecord record_from_json(const nlohmann::json& j) {
  try {
    DeploymentRecord r;
    r.id = j.at("id").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.device = j.at("device").get<std::string>();
    r.reason = j.value("reason", "");
    r.model_bytes = j.value("model_bytes", std::uint64_t{0});
    for (const auto& c : j.value("checks", nlohmann::json::array())) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                          c.value("detail", "")});
    }
    r.warnings = j.value("warnings", std::vector<std::string>{});
    for (const auto& t : j.at("timestamps")) {
      auto st = parse_state(t.at("state").get<std::string>());
      auto at = parse_timestamp(t.at("at").get<std::string>());
      if (!st || !at) throw Error("bad transition");
      r.transitions.push_back({*st, t.value("bytes_sent", std::uint64_t{0}), *at});
    }
    if (r.transitions.empty()) throw Error("no transitions");
    if (to_string(r.state()) != j.at("state").get<std::string>()) {
      throw Error("state disagrees with transitions");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed deployment record: ") + e.what());
  } catch (const Error& e) {
    throw Error(std::string("malformed deployment record: ") + e.what());
  }
}

RecordStore::RecordStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void RecordStore::append(const DeploymentRecord& r) {
  std::string line = to_json(r).dump() + "\n";
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open " + path_.string());
  out << line;
  out.flush();
  if (!out) throw Error("cannot write " + path_.string());
}

std::map<std::string, DeploymentRecord> RecordStore::load() const {
  std::lock_guard lock(mu_);
  std::map<std::string, DeploymentRecord> out;
  std::ifstream in(path_, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;
    try {
      auto r = record_from_json(j);
      out.insert_or_assign(r.id, std::move(r));
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace tinykg::deploy
