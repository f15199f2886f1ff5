// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "tinykg/error.hpp"
#include "tinykg/ontology/descriptors.hpp"

namespace tinykg::deploy {

/// Link-level failure; the message becomes the record's failure reason.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// What the device reports once the transfer is complete.
struct DeviceStatus {
  std::uint64_t bytes_received = 0;
  std::uint32_t crc32 = 0;
};

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

/// Ordered, acknowledged byte stream to one device. `send_chunk` returns
/// once the chunk is acknowledged; `finalize` follows the last chunk.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void open(const ontology::Endpoint& endpoint) = 0;
  virtual void send_chunk(std::span<const std::uint8_t> chunk) = 0;
  virtual DeviceStatus finalize() = 0;
};

/// Simulated flash: `<root>/<address>/firmware.tflite` plus `meta.json`
/// holding capacity, checksum and size. Writes beyond `capacity_bytes`
/// fail with "capacity exceeded" and leave any previous firmware intact.
class LoopbackTransport : public Transport {
 public:
  LoopbackTransport(std::filesystem::path root, std::optional<std::uint64_t> capacity_bytes);

  void open(const ontology::Endpoint& endpoint) override;
  void send_chunk(std::span<const std::uint8_t> chunk) override;
  DeviceStatus finalize() override;

  std::size_t chunks_received() const { return chunks_; }

 private:
  std::filesystem::path root_;
  std::optional<std::uint64_t> capacity_;
  std::filesystem::path dir_;
  std::ofstream out_;
  std::uint64_t written_ = 0;
  std::size_t chunks_ = 0;
  bool open_ = false;
};

/// Passes through to `inner` until chunk `fail_at` (1-based), which throws
/// TransportError("transport: chunk N") without reaching the device.
class FaultInjectingTransport : public Transport {
 public:
  FaultInjectingTransport(std::unique_ptr<Transport> inner, std::size_t fail_at);

  void open(const ontology::Endpoint& endpoint) override { inner_->open(endpoint); }
  void send_chunk(std::span<const std::uint8_t> chunk) override;
  DeviceStatus finalize() override { return inner_->finalize(); }

 private:
  std::unique_ptr<Transport> inner_;
  std::size_t fail_at_;
  std::size_t sent_ = 0;
};

}  // namespace tinykg::deploy
