// Copyright 2026 The LatentMark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <mutex>
#include <string>

#include "lmk/tensor.hpp"

namespace lmk {

/// Client for an external generation backend speaking newline-delimited JSON
/// over its stdin/stdout. One request is in flight at a time; use several
/// clients for parallelism.
class BridgeClient {
 public:
  static constexpr const char* kProtocol = "lmk-bridge";
  static constexpr int kVersion = 1;

  /// Spawns `/bin/sh -c command` and waits for the handshake line.
  BridgeClient(const std::string& command, std::chrono::milliseconds timeout);
  ~BridgeClient();

  BridgeClient(const BridgeClient&) = delete;
  BridgeClient& operator=(const BridgeClient&) = delete;

  /// Sends {"op": op, ...tensor} and returns the response tensor.
  Tensor request(const std::string& op, const Tensor& payload);

 private:
  std::string read_line();
  void write_line(const std::string& line);
  void shutdown();

  std::mutex mutex_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 1;
  bool broken_ = false;
};

}  // namespace lmk
