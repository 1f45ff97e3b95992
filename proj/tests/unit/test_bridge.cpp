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

// Wire-protocol tests against the echo bridge test double.

#include <chrono>
#include <string>

#include <gtest/gtest.h>

#include "lmk/bridge.hpp"
#include "lmk/channel.hpp"
#include "lmk/error.hpp"
#include "lmk/rng.hpp"

namespace lmk {
namespace {

using std::chrono::milliseconds;

std::string bridge(const std::string& mode) { return std::string(LMK_ECHO_BRIDGE_PATH) + " " + mode; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kUsage;
}

const Tensor kPayload = gaussian_latent(SeededRng(Key256{}, 1), {1, 4, 8, 8});

TEST(Bridge, EchoRoundTripIsFloat32Exact) {
  BridgeClient client(bridge("echo"), milliseconds(5000));
  Tensor want = kPayload;
  for (double& v : want.data()) v = static_cast<float>(v);
  EXPECT_EQ(client.request("forward", kPayload), want);
  EXPECT_EQ(client.request("invert", want), want);
}

TEST(Bridge, EchoChannelBehavesLikeIdentity) {
  ChannelSpec spec;
  spec.kind = ChannelKind::kExternalBridge;
  spec.command = bridge("echo");
  const Shape shape{1, 4, 8, 8};
  const Channel echo(spec, shape, Key256{});
  const Channel identity({}, shape, Key256{});
  Tensor x = kPayload;
  for (double& v : x.data()) v = static_cast<float>(v);
  const Media m = echo.forward(x);
  EXPECT_EQ(m.kind, MediaKind::kLatent);
  EXPECT_EQ(m.data, identity.forward(x).data);
  EXPECT_EQ(echo.invert(m, 3), identity.invert(identity.forward(x), 3));
  EXPECT_FALSE(echo.supports_trajectory());
  EXPECT_FALSE(echo.pool_operator(4).has_value());
}

TEST(Bridge, ScaleModeIsNotIdentity) {
  BridgeClient client(bridge("scale"), milliseconds(5000));
  const Tensor out = client.request("forward", kPayload);
  EXPECT_NEAR(out[0], 2.0 * kPayload[0], 1e-5);
}

TEST(Bridge, BadHandshakeIsProtocolError) {
  EXPECT_EQ(kind_of([] { BridgeClient c(bridge("bad-handshake"), milliseconds(5000)); }),
            ErrorKind::kProtocol);
}

TEST(Bridge, MalformedResponseIsProtocolError) {
  BridgeClient client(bridge("malformed"), milliseconds(5000));
  EXPECT_EQ(kind_of([&] { client.request("forward", kPayload); }), ErrorKind::kProtocol);
  // A failed client stays failed.
  EXPECT_EQ(kind_of([&] { client.request("forward", kPayload); }), ErrorKind::kChannel);
}

TEST(Bridge, WrongIdIsProtocolError) {
  BridgeClient client(bridge("wrong-id"), milliseconds(5000));
  EXPECT_EQ(kind_of([&] { client.request("forward", kPayload); }), ErrorKind::kProtocol);
}

TEST(Bridge, BackendErrorIsChannelError) {
  BridgeClient client(bridge("error"), milliseconds(5000));
  EXPECT_EQ(kind_of([&] { client.request("invert", kPayload); }), ErrorKind::kChannel);
}

TEST(Bridge, DeadBackendIsChannelError) {
  BridgeClient client(bridge("die"), milliseconds(5000));
  EXPECT_EQ(kind_of([&] { client.request("forward", kPayload); }), ErrorKind::kChannel);
}

TEST(Bridge, SilentBackendTimesOut) {
  BridgeClient client(bridge("hang"), milliseconds(300));
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(kind_of([&] { client.request("forward", kPayload); }), ErrorKind::kTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(Bridge, MissingProgramFailsAtHandshake) {
  const ErrorKind k = kind_of([] { BridgeClient c("/nonexistent/lmk-backend", milliseconds(2000)); });
  EXPECT_TRUE(k == ErrorKind::kChannel || k == ErrorKind::kProtocol) << error_kind_name(k);
}

}  // namespace
}  // namespace lmk
