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

#include "lmk/bridge.hpp"

#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "lmk/blob.hpp"
#include "lmk/error.hpp"

namespace lmk {
namespace {

using json = nlohmann::json;

// Offending lines are quoted in errors; keep payload-sized lines readable.
std::string excerpt(const std::string& line) {
  constexpr std::size_t kMax = 160;
  return line.size() <= kMax ? line : line.substr(0, kMax) + "...";
}

json shape_json(const Shape& s) {
  if (s.frames == 1) return json::array({s.channels, s.height, s.width});
  return json::array({s.frames, s.channels, s.height, s.width});
}

Shape shape_from_json(const json& j, const std::string& line) {
  require(j.is_array() && (j.size() == 3 || j.size() == 4), ErrorKind::kProtocol,
          "bridge response has a bad shape field: " + excerpt(line));
  std::vector<std::size_t> d;
  for (const auto& v : j) {
    require(v.is_number_unsigned() && v.get<std::size_t>() > 0, ErrorKind::kProtocol,
            "bridge response has a bad shape field: " + excerpt(line));
    d.push_back(v.get<std::size_t>());
  }
  if (d.size() == 3) return {1, d[0], d[1], d[2]};
  return {d[0], d[1], d[2], d[3]};
}

}  // namespace

BridgeClient::BridgeClient(const std::string& command, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  int in_pipe[2];
  int out_pipe[2];
  require(::pipe2(in_pipe, O_CLOEXEC) == 0 && ::pipe2(out_pipe, O_CLOEXEC) == 0, ErrorKind::kChannel,
          std::string("bridge pipe creation failed: ") + std::strerror(errno));
  pid_ = ::fork();
  if (pid_ < 0) {
    fail(ErrorKind::kChannel, std::string("bridge spawn failed: ") + std::strerror(errno));
  }
  if (pid_ > 0) ::setpgid(pid_, pid_);
  if (pid_ == 0) {
    // Own process group, so a hung backend is killed along with its shell.
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  // A dead bridge must surface as an error, not kill the host.
  std::signal(SIGPIPE, SIG_IGN);

  try {
    const std::string line = read_line();
    json hs;
    try {
      hs = json::parse(line);
    } catch (const json::exception&) {
      fail(ErrorKind::kProtocol, "bridge handshake is not JSON: " + excerpt(line));
    }
    require(hs.is_object() && hs.value("protocol", "") == kProtocol && hs.value("version", 0) == kVersion,
            ErrorKind::kProtocol, "bridge handshake mismatch: " + excerpt(line));
  } catch (...) {
    shutdown();
    throw;
  }
}

BridgeClient::~BridgeClient() { shutdown(); }

void BridgeClient::shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    // Closing stdin asks the bridge to exit; do not wait on a hung one.
    int status = 0;
    bool exited = false;
    for (int i = 0; i < 50 && !exited; ++i) {
      exited = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!exited) ::usleep(2000);
    }
    if (!exited) {
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

std::string BridgeClient::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      broken_ = true;
      fail(ErrorKind::kTimeout, "bridge did not answer within " + std::to_string(timeout_.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      broken_ = true;
      fail(ErrorKind::kChannel, "bridge closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void BridgeClient::write_line(const std::string& line) {
  const std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      broken_ = true;
      fail(ErrorKind::kChannel, std::string("bridge write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

Tensor BridgeClient::request(const std::string& op, const Tensor& payload) {
  std::lock_guard lock(mutex_);
  require(!broken_, ErrorKind::kChannel, "bridge is unusable after an earlier failure");
  const std::uint64_t id = next_id_++;
  const json req = {{"id", id},
                    {"op", op},
                    {"shape", shape_json(payload.shape())},
                    {"data_b64", base64_encode(encode_f32(payload.data()))}};
  write_line(req.dump());
  const std::string line = read_line();

  json resp;
  try {
    resp = json::parse(line);
  } catch (const json::exception&) {
    broken_ = true;
    fail(ErrorKind::kProtocol, "bridge response is not valid JSON: " + excerpt(line));
  }
  require(resp.is_object() && resp.contains("id") && resp["id"].is_number_unsigned() &&
              resp.contains("ok") && resp["ok"].is_boolean(),
          ErrorKind::kProtocol, "bridge response lacks id/ok: " + excerpt(line));
  require(resp["id"].get<std::uint64_t>() == id, ErrorKind::kProtocol,
          "bridge answered id " + resp["id"].dump() + " to request " + std::to_string(id));
  if (!resp["ok"].get<bool>()) {
    const std::string msg = resp.contains("error") && resp["error"].is_string()
                                ? resp["error"].get<std::string>()
                                : std::string("(no message)");
    fail(ErrorKind::kChannel, "bridge " + op + " failed: " + msg);
  }
  require(resp.contains("shape") && resp.contains("data_b64") && resp["data_b64"].is_string(),
          ErrorKind::kProtocol, "bridge response lacks shape/data_b64: " + excerpt(line));
  const Shape shape = shape_from_json(resp["shape"], line);
  auto values = decode_f32(base64_decode(resp["data_b64"].get<std::string>()));
  require(values.size() == shape.size(), ErrorKind::kProtocol,
          "bridge payload holds " + std::to_string(values.size()) + " values for shape " + to_string(shape));
  return Tensor(shape, std::move(values));
}

}  // namespace lmk
