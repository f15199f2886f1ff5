// Copyright 2026 The tinykg Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tinykg/deploy/transport.hpp"

#include <zlib.h>

#include <json.hpp>
#include <vector>

namespace tinykg::deploy {

namespace fs = std::filesystem;

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large inputs in slices.
  constexpr std::size_t kSlice = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kSlice) {
    auto n = std::min(kSlice, bytes.size() - off);
    crc = ::crc32(crc, bytes.data() + off, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

LoopbackTransport::LoopbackTransport(fs::path root, std::optional<std::uint64_t> capacity_bytes)
    : root_(std::move(root)), capacity_(capacity_bytes) {}

void LoopbackTransport::open(const ontology::Endpoint& endpoint) {
  if (!ontology::is_device_id(endpoint.address) || endpoint.address == "." ||
      endpoint.address == "..") {
    throw TransportError("transport: bad loopback address '" + endpoint.address + "'");
  }
  dir_ = root_ / endpoint.address;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw TransportError("transport: cannot create " + dir_.string());
  out_.open(dir_ / "firmware.tflite.partial", std::ios::binary | std::ios::trunc);
  if (!out_) throw TransportError("transport: cannot open " + dir_.string());
  written_ = 0;
  chunks_ = 0;
  open_ = true;
}

void LoopbackTransport::send_chunk(std::span<const std::uint8_t> chunk) {
  if (!open_) throw TransportError("transport: not open");
  if (capacity_ && written_ + chunk.size() > *capacity_) {
    out_.close();
    fs::remove(dir_ / "firmware.tflite.partial");
    open_ = false;
    throw TransportError("capacity exceeded");
  }
  out_.write(reinterpret_cast<const char*>(chunk.data()),
             static_cast<std::streamsize>(chunk.size()));
  if (!out_) throw TransportError("transport: write failed");
  written_ += chunk.size();
  ++chunks_;
}

DeviceStatus LoopbackTransport::finalize() {
  if (!open_) throw TransportError("transport: not open");
  out_.close();
  open_ = false;
  fs::rename(dir_ / "firmware.tflite.partial", dir_ / "firmware.tflite");

  // Report what actually landed on the simulated flash.
  std::ifstream in(dir_ / "firmware.tflite", std::ios::binary);
  std::vector<std::uint8_t> stored((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  DeviceStatus status{stored.size(), crc32(stored)};

  nlohmann::json meta = {{"size", status.bytes_received}, {"checksum", status.crc32}};
  meta["capacity"] = capacity_ ? nlohmann::json(*capacity_) : nlohmann::json(nullptr);
  std::ofstream(dir_ / "meta.json", std::ios::trunc) << meta.dump(2) << "\n";
  return status;
}

FaultInjectingTransport::FaultInjectingTransport(std::unique_ptr<Transport> inner,
                                                 std::size_t fail_at)
    : inner_(std::move(inner)), fail_at_(fail_at) {}

void FaultInjectingTransport::send_chunk(std::span<const std::uint8_t> chunk) {
  ++sent_;
  if (sent_ == fail_at_) throw TransportError("transport: chunk " + std::to_string(sent_));
  inner_->send_chunk(chunk);
}

}  // namespace tinykg::deploy
