// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <thread>

#include <json.hpp>

#include "support/fixture_kg.hpp"
#include "tinykg/deploy/deployer.hpp"
#include "tinykg/match/matchmaker.hpp"
#include "tinykg/model/fixture.hpp"
#include "tinykg/ontology/mapping.hpp"

namespace tinykg {
namespace {

namespace fs = std::filesystem;
using deploy::DeploymentPlan;
using deploy::DeploymentRecord;
using deploy::Rejection;
using deploy::State;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("tinykg-deploy-" + std::to_string(rd()) + "-" +
                                         std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

const rdf::Graph& kg() {
  static const rdf::Graph g = testing::fixture_graph();
  return g;
}

std::string model(const char* uuid) { return ontology::model_iri(uuid).value(); }
std::string device(const char* id) { return ontology::device_iri(id).value(); }

std::vector<std::uint8_t> five_kib_model() {
  model::FixtureOptions opts;
  opts.pad_to_bytes = 5 * 1024;
  auto bytes = model::build_fixture({model::fully_connected(8, 4, true)}, opts);
  EXPECT_EQ(bytes.size(), 5u * 1024);
  return bytes;
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

DeploymentPlan must_plan(const std::string& m, const std::string& d, std::uint64_t bytes,
                         deploy::PlanOptions opts = {}) {
  auto p = deploy::plan(kg(), m, d, bytes, opts);
  if (auto* rej = std::get_if<Rejection>(&p)) {
    ADD_FAILURE() << rej->reason();
    return {};
  }
  return std::get<DeploymentPlan>(p);
}

// Records each send and the concurrency seen across instances.
struct Probe {
  std::atomic<int> sends{0};
  std::atomic<int> active{0};
  std::atomic<int> max_active{0};
  std::mutex mu;
  std::map<std::string, int> per_device_active;
  int max_per_device = 0;
};

class ProbeTransport : public deploy::Transport {
 public:
  ProbeTransport(std::unique_ptr<deploy::Transport> inner, Probe& probe, std::string device,
                 std::chrono::milliseconds delay)
      : inner_(std::move(inner)), probe_(probe), device_(std::move(device)), delay_(delay) {}

  void open(const ontology::Endpoint& e) override {
    int now = ++probe_.active;
    int seen = probe_.max_active.load();
    while (now > seen && !probe_.max_active.compare_exchange_weak(seen, now)) {
    }
    std::lock_guard lock(probe_.mu);
    int& n = ++probe_.per_device_active[device_];
    probe_.max_per_device = std::max(probe_.max_per_device, n);
    inner_->open(e);
  }
  void send_chunk(std::span<const std::uint8_t> c) override {
    ++probe_.sends;
    std::this_thread::sleep_for(delay_);
    inner_->send_chunk(c);
  }
  deploy::DeviceStatus finalize() override {
    auto s = inner_->finalize();
    --probe_.active;
    std::lock_guard lock(probe_.mu);
    --probe_.per_device_active[device_];
    return s;
  }

 private:
  std::unique_ptr<deploy::Transport> inner_;
  Probe& probe_;
  std::string device_;
  std::chrono::milliseconds delay_;
};

// Independent statement of the allowed transition order.
bool sound(const DeploymentRecord& r) {
  if (r.transitions.empty() || r.transitions.front().state != State::kPending) return false;
  for (std::size_t i = 1; i < r.transitions.size(); ++i) {
    State a = r.transitions[i - 1].state, b = r.transitions[i].state;
    bool ok = false;
    if (a == State::kPending) ok = b == State::kTransferring || b == State::kFailed;
    if (a == State::kTransferring) {
      ok = b == State::kTransferring || b == State::kVerifying || b == State::kFailed;
    }
    if (a == State::kVerifying) ok = b == State::kSucceeded || b == State::kFailed;
    if (!ok) return false;
    if (r.transitions[i].at < r.transitions[i - 1].at) return false;
  }
  State last = r.transitions.back().state;
  return last == State::kSucceeded || last == State::kFailed;
}

TEST(Plan, CompatibleBoardPassesEveryCheck) {
  auto p = deploy::plan(kg(), model(testing::kMotionUuid), device("002"), 5120);
  ASSERT_TRUE(std::holds_alternative<DeploymentPlan>(p));
  const auto& plan = std::get<DeploymentPlan>(p);
  std::set<std::string> names;
  for (const auto& c : plan.checks) {
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    names.insert(c.name);
  }
  EXPECT_EQ(names, (std::set<std::string>{"sensors", "ram", "flash", "size"}));
  EXPECT_TRUE(plan.warnings.empty());
  EXPECT_EQ(plan.device.device_id, "002");
}

TEST(Plan, SmallRamIsRejectedByName) {
  auto p = deploy::plan(kg(), model(testing::kMotionUuid), device("001"), 5120);
  ASSERT_TRUE(std::holds_alternative<Rejection>(p));
  const auto& rej = std::get<Rejection>(p);
  std::set<std::string> failed;
  for (const auto& c : rej.checks) {
    if (!c.passed) failed.insert(c.name);
  }
  EXPECT_TRUE(failed.count("ram"));
  EXPECT_NE(rej.reason().find("ram"), std::string::npos);
}

TEST(Plan, RejectionListsEveryFailedCheck) {
  auto p = deploy::plan(kg(), model(testing::kPersonDetectUuid), device("001"), 5120);
  ASSERT_TRUE(std::holds_alternative<Rejection>(p));
  EXPECT_EQ(std::get<Rejection>(p).reason(), "rejected: sensors, ram, flash");
}

TEST(Plan, UnknownIrisAreNotFound) {
  EXPECT_THROW(deploy::plan(kg(), model(testing::kMotionUuid), device("nope"), 1),
               deploy::NotFoundError);
  EXPECT_THROW(deploy::plan(kg(), model("00000000-0000-4000-8000-000000000000"), device("002"), 1),
               deploy::NotFoundError);
  // A device IRI in the model slot is not a model.
  EXPECT_THROW(deploy::plan(kg(), device("002"), device("002"), 1), deploy::NotFoundError);
}

TEST(Plan, ForceTurnsFailuresIntoWarningsButNotSize) {
  deploy::PlanOptions force{true, {}};
  auto p = deploy::plan(kg(), model(testing::kMotionUuid), device("001"), 5120, force);
  ASSERT_TRUE(std::holds_alternative<DeploymentPlan>(p));
  const auto& warnings = std::get<DeploymentPlan>(p).warnings;
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_EQ(warnings[0].rfind("forced: ram", 0), 0u);

  std::uint64_t too_big = 256 * 1024 + 1;
  auto q = deploy::plan(kg(), model(testing::kMotionUuid), device("001"), too_big, force);
  ASSERT_TRUE(std::holds_alternative<Rejection>(q));
  EXPECT_NE(std::get<Rejection>(q).reason().find("size"), std::string::npos);
}

TEST(Plan, RuntimeCheckOnlyWhenRequested) {
  deploy::PlanOptions opts;
  opts.runtime = "TFLite-Micro";
  EXPECT_TRUE(std::holds_alternative<DeploymentPlan>(
      deploy::plan(kg(), model(testing::kMotionUuid), device("002"), 10, opts)));
  opts.runtime = "ONNX";
  auto p = deploy::plan(kg(), model(testing::kMotionUuid), device("002"), 10, opts);
  ASSERT_TRUE(std::holds_alternative<Rejection>(p));
  EXPECT_EQ(std::get<Rejection>(p).reason(), "rejected: runtime");
}

TEST(Plan, AgreesWithMatchmaker) {
  for (const auto& m : testing::fixture_models()) {
    auto boards = match::devices_for_model(kg(), match::requirements(m));
    std::set<std::string> matched;
    for (const auto& row : boards) matched.insert(row.subject.value());
    for (const auto& d : testing::fixture_devices()) {
      auto p = deploy::plan(kg(), ontology::model_iri(m.identifier).value(),
                            ontology::device_iri(d.device_id).value(), m.min_flash_kb.bytes());
      EXPECT_EQ(std::holds_alternative<DeploymentPlan>(p),
                matched.count(ontology::device_iri(d.device_id).value()) > 0)
          << m.name << " / " << d.device_id;
    }
  }
}

TEST(Execute, LoopbackStoresIdenticalBytes) {
  TempDir dir;
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  deploy::LoopbackTransport loop(dir.path(), std::nullopt);
  std::vector<State> seen;
  auto r = deploy::execute(plan, bytes, loop, 1024,
                           [&](const DeploymentRecord& rec) { seen.push_back(rec.state()); });
  EXPECT_EQ(r.state(), State::kSucceeded) << r.reason;
  EXPECT_EQ(loop.chunks_received(), 5u);
  EXPECT_EQ(read_bytes(dir.path() / "002" / "firmware.tflite"), bytes);
  EXPECT_FALSE(fs::exists(dir.path() / "002" / "firmware.tflite.partial"));
  EXPECT_TRUE(sound(r));
  EXPECT_EQ(r.bytes_sent(), 5120u);
  ASSERT_FALSE(seen.empty());
  EXPECT_EQ(seen.front(), State::kPending);
  EXPECT_EQ(seen.back(), State::kSucceeded);

  auto meta = nlohmann::json::parse(std::ifstream(dir.path() / "002" / "meta.json"));
  EXPECT_EQ(meta["size"], 5120);
  EXPECT_EQ(meta["checksum"].get<std::uint32_t>(), deploy::crc32(bytes));
  EXPECT_TRUE(meta["capacity"].is_null());
}

TEST(Execute, ChunkCountFollowsChunkSize) {
  TempDir dir;
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  for (std::size_t chunk : {1u, 7u, 1000u, 5120u, 9999u}) {
    deploy::LoopbackTransport loop(dir.path(), std::nullopt);
    auto r = deploy::execute(plan, bytes, loop, chunk);
    EXPECT_EQ(r.state(), State::kSucceeded);
    EXPECT_EQ(loop.chunks_received(), (bytes.size() + chunk - 1) / chunk);
    EXPECT_EQ(read_bytes(dir.path() / "002" / "firmware.tflite"), bytes);
  }
}

TEST(Execute, FaultAtChunkThree) {
  TempDir dir;
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  deploy::FaultInjectingTransport t(
      std::make_unique<deploy::LoopbackTransport>(dir.path(), std::nullopt), 3);
  auto r = deploy::execute(plan, bytes, t, 1024);
  EXPECT_EQ(r.state(), State::kFailed);
  EXPECT_EQ(r.reason, "transport: chunk 3");
  ASSERT_GE(r.transitions.size(), 2u);
  const auto& progress = r.transitions[r.transitions.size() - 2];
  EXPECT_EQ(progress.state, State::kTransferring);
  EXPECT_EQ(progress.bytes_sent, 2048u);
  EXPECT_TRUE(sound(r));
  EXPECT_FALSE(fs::exists(dir.path() / "002" / "firmware.tflite"));
}

TEST(Execute, CapacityExceeded) {
  TempDir dir;
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  // An earlier image survives a failed, oversized transfer.
  std::vector<std::uint8_t> small(100, 0xab);
  auto small_plan = must_plan(model(testing::kMotionUuid), device("002"), small.size());
  deploy::LoopbackTransport first(dir.path(), 4096);
  ASSERT_EQ(deploy::execute(small_plan, small, first).state(), State::kSucceeded);

  deploy::LoopbackTransport loop(dir.path(), 4096);
  auto r = deploy::execute(plan, bytes, loop, 1024);
  EXPECT_EQ(r.state(), State::kFailed);
  EXPECT_EQ(r.reason, "capacity exceeded");
  EXPECT_EQ(r.bytes_sent(), 4096u);
  EXPECT_EQ(read_bytes(dir.path() / "002" / "firmware.tflite"), small);
}

class CorruptingTransport : public deploy::Transport {
 public:
  void open(const ontology::Endpoint&) override {}
  void send_chunk(std::span<const std::uint8_t> c) override { n_ += c.size(); }
  deploy::DeviceStatus finalize() override { return {n_, 0xdeadbeef}; }

 private:
  std::uint64_t n_ = 0;
};

TEST(Execute, ChecksumMismatchFails) {
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  CorruptingTransport t;
  auto r = deploy::execute(plan, bytes, t);
  EXPECT_EQ(r.state(), State::kFailed);
  EXPECT_EQ(r.reason, "verification: checksum mismatch");
  EXPECT_EQ(r.transitions[r.transitions.size() - 2].state, State::kVerifying);
}

TEST(Execute, SizeMismatchIsAProgrammingError) {
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), 10);
  CorruptingTransport t;
  std::vector<std::uint8_t> wrong(11);
  EXPECT_THROW(deploy::execute(plan, wrong, t), std::invalid_argument);
}

TEST(StateMachine, TerminalRecordsDoNotMove) {
  DeploymentRecord r;
  EXPECT_THROW(r.advance(State::kTransferring), deploy::StateError);
  r.advance(State::kPending);
  EXPECT_THROW(r.advance(State::kVerifying), deploy::StateError);
  r.advance(State::kTransferring, 10);
  EXPECT_THROW(r.advance(State::kTransferring, 5), deploy::StateError);
  r.advance(State::kVerifying);
  r.advance(State::kSucceeded);
  for (State s : {State::kPending, State::kTransferring, State::kVerifying, State::kSucceeded,
                  State::kFailed}) {
    EXPECT_THROW(r.advance(s), deploy::StateError);
  }
  EXPECT_EQ(r.state(), State::kSucceeded);
}

TEST(StateMachine, RandomFaultsAlwaysRecordSoundSequences) {
  TempDir dir;
  std::mt19937 rng(3);
  for (int i = 0; i < 60; ++i) {
    std::vector<std::uint8_t> bytes(rng() % 6000);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    auto plan = must_plan(model(testing::kMotionUuid), device("003"), bytes.size());
    std::optional<std::uint64_t> cap;
    if (rng() % 3 == 0) cap = rng() % 6000;
    std::unique_ptr<deploy::Transport> t =
        std::make_unique<deploy::LoopbackTransport>(dir.path(), cap);
    if (rng() % 2) t = std::make_unique<deploy::FaultInjectingTransport>(std::move(t), rng() % 8);
    std::vector<DeploymentRecord> snapshots;
    auto r = deploy::execute(plan, bytes, *t, 1 + rng() % 2048,
                             [&](const DeploymentRecord& s) { snapshots.push_back(s); });
    EXPECT_TRUE(sound(r));
    // Every snapshot is a prefix of the final transition list.
    for (const auto& s : snapshots) {
      ASSERT_LE(s.transitions.size(), r.transitions.size());
      for (std::size_t k = 0; k < s.transitions.size(); ++k) {
        EXPECT_EQ(s.transitions[k].state, r.transitions[k].state);
      }
    }
    if (r.state() == State::kSucceeded) {
      EXPECT_EQ(read_bytes(dir.path() / "003" / "firmware.tflite"), bytes);
    }
  }
}

TEST(Records, JsonRoundTripAndTimestamps) {
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  CorruptingTransport t;
  auto r = deploy::execute(plan, bytes, t);
  auto j = deploy::to_json(r);
  EXPECT_EQ(j["state"], "Failed");
  EXPECT_EQ(j["model"], model(testing::kMotionUuid));
  std::regex iso(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{3}Z)");
  for (const auto& ts : j["timestamps"]) {
    EXPECT_TRUE(std::regex_match(ts["at"].get<std::string>(), iso)) << ts.dump();
  }
  auto back = deploy::record_from_json(j);
  EXPECT_EQ(deploy::to_json(back), j);
  EXPECT_THROW(deploy::record_from_json(nlohmann::json::object()), Error);

  auto t0 = deploy::parse_timestamp("2026-10-14T09:30:00.125Z");
  ASSERT_TRUE(t0);
  EXPECT_EQ(deploy::format_timestamp(*t0), "2026-10-14T09:30:00.125Z");
  EXPECT_FALSE(deploy::parse_timestamp("2026-10-14 09:30"));
}

TEST(Records, StoreKeepsLatestSnapshotAndMarksInterrupted) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  DeploymentRecord r;
  r.id = "dangling";
  r.model = model(testing::kMotionUuid);
  r.device = device("002");
  r.advance(State::kPending);
  store.append(r);
  r.advance(State::kTransferring, 0);
  store.append(r);
  {
    std::ofstream(store.path(), std::ios::app) << "not json\n";
  }
  auto loaded = store.load();
  ASSERT_EQ(loaded.count("dangling"), 1u);
  EXPECT_EQ(loaded.at("dangling").state(), State::kTransferring);

  deploy::Deployer d(store, [](const ontology::DeviceDescriptor&) { return nullptr; });
  auto rec = d.get("dangling");
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->state(), State::kFailed);
  EXPECT_EQ(rec->reason, "interrupted");
  EXPECT_EQ(store.load().at("dangling").state(), State::kFailed);
}

deploy::TransportFactory loopback_factory(const fs::path& root, Probe* probe = nullptr,
                                          std::chrono::milliseconds delay = {}) {
  return [root, probe, delay](const ontology::DeviceDescriptor& d)
             -> std::unique_ptr<deploy::Transport> {
    auto loop = std::make_unique<deploy::LoopbackTransport>(root, d.flash_kb.bytes());
    if (!probe) return loop;
    return std::make_unique<ProbeTransport>(std::move(loop), *probe, d.device_id, delay);
  };
}

TEST(MassDeploy, TwoSucceedOneRejected) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  deploy::Deployer d(store, loopback_factory(dir.path() / "flash"));
  auto bytes = five_kib_model();
  auto out = d.mass_deploy(kg(), model(testing::kMotionUuid),
                           {device("002"), device("003"), device("004")}, bytes);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].state(), State::kSucceeded) << out[0].reason;
  EXPECT_EQ(out[1].state(), State::kSucceeded) << out[1].reason;
  EXPECT_EQ(out[2].state(), State::kFailed);
  EXPECT_EQ(out[2].reason.rfind("rejected: ", 0), 0u);
  EXPECT_EQ(read_bytes(dir.path() / "flash" / "002" / "firmware.tflite"), bytes);
  EXPECT_EQ(read_bytes(dir.path() / "flash" / "003" / "firmware.tflite"), bytes);
  EXPECT_FALSE(fs::exists(dir.path() / "flash" / "004"));

  auto persisted = store.load();
  ASSERT_EQ(persisted.size(), 3u);
  for (const auto& r : out) {
    EXPECT_EQ(persisted.at(r.id).state(), r.state());
    EXPECT_TRUE(sound(r));
  }
}

TEST(MassDeploy, EmptyListGivesNoRecords) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  deploy::Deployer d(store, loopback_factory(dir.path()));
  EXPECT_TRUE(d.mass_deploy(kg(), model(testing::kMotionUuid), {}, five_kib_model()).empty());
}

TEST(MassDeploy, UnknownDeviceIsAFailedRecord) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  deploy::Deployer d(store, loopback_factory(dir.path()));
  auto out = d.mass_deploy(kg(), model(testing::kMotionUuid), {device("404"), device("002")},
                           five_kib_model());
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].state(), State::kFailed);
  EXPECT_NE(out[0].reason.find("not found"), std::string::npos);
  EXPECT_EQ(out[1].state(), State::kSucceeded);
}

TEST(MassDeploy, RepeatedDeviceIsSerializedDistinctDevicesOverlap) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  Probe probe;
  deploy::Deployer d(store,
                     loopback_factory(dir.path(), &probe, std::chrono::milliseconds(10)));
  auto out = d.mass_deploy(kg(), model(testing::kMotionUuid),
                           {device("002"), device("002"), device("003")}, five_kib_model());
  ASSERT_EQ(out.size(), 3u);
  for (const auto& r : out) EXPECT_EQ(r.state(), State::kSucceeded) << r.reason;
  EXPECT_EQ(probe.max_per_device, 1);
  EXPECT_EQ(probe.max_active.load(), 2);
  EXPECT_EQ(probe.sends.load(), 15);
  // The repeat starts only after the first reached its terminal state.
  EXPECT_LE(out[0].transitions.back().at, out[1].transitions.front().at);
}

TEST(Deployer, BackgroundStartAndConflict) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  Probe probe;
  deploy::Deployer d(store, loopback_factory(dir.path(), &probe, std::chrono::milliseconds(20)));
  auto bytes = five_kib_model();
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), bytes.size());
  auto id = d.start(plan, bytes);
  EXPECT_TRUE(d.busy(device("002")));
  EXPECT_THROW(d.start(plan, bytes), deploy::ConflictError);
  ASSERT_TRUE(d.get(id));
  d.wait_idle();
  EXPECT_FALSE(d.busy(device("002")));
  auto r = d.get(id);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->state(), State::kSucceeded);
  EXPECT_EQ(store.load().at(id).state(), State::kSucceeded);
  auto id2 = d.start(plan, bytes);
  d.wait_idle();
  EXPECT_EQ(d.get(id2)->state(), State::kSucceeded);
  EXPECT_EQ(d.list().size(), 2u);
}

TEST(Deployer, MissingTransportFailsCleanly) {
  TempDir dir;
  deploy::RecordStore store(dir.path() / "deployments.jsonl");
  deploy::Deployer d(store, [](const ontology::DeviceDescriptor&)
                                -> std::unique_ptr<deploy::Transport> {
    throw deploy::TransportError("no radio");
  });
  auto plan = must_plan(model(testing::kMotionUuid), device("002"), 4);
  std::vector<std::uint8_t> bytes(4);
  auto r = d.run(plan, bytes);
  EXPECT_EQ(r.state(), State::kFailed);
  EXPECT_EQ(r.reason, "transport: no radio");
}

}  // namespace
}  // namespace tinykg
