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

#include "lmk/blob.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lmk/error.hpp"

namespace lmk {
namespace {

static_assert(std::endian::native == std::endian::little, "LMK1 blobs assume a little-endian host");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_f32(std::span<const double> values) {
  std::vector<std::uint8_t> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto f = static_cast<float>(values[i]);
    std::memcpy(out.data() + 4 * i, &f, 4);
  }
  return out;
}

std::vector<double> decode_f32(std::span<const std::uint8_t> bytes) {
  require(bytes.size() % 4 == 0, ErrorKind::kProtocol, "float32 payload length not a multiple of 4");
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    float f;
    std::memcpy(&f, bytes.data() + 4 * i, 4);
    out[i] = f;
  }
  return out;
}

std::vector<std::uint8_t> encode_blob(const Tensor& tensor) {
  const Shape& s = tensor.shape();
  const std::uint8_t rank = s.frames == 1 ? 3 : 4;
  std::vector<std::uint8_t> out = {'L', 'M', 'K', '1', rank, kDtypeFloat32};
  out.resize(16, 0);
  if (rank == 4) put_u32(out, static_cast<std::uint32_t>(s.frames));
  put_u32(out, static_cast<std::uint32_t>(s.channels));
  put_u32(out, static_cast<std::uint32_t>(s.height));
  put_u32(out, static_cast<std::uint32_t>(s.width));
  const auto payload = encode_f32(tensor.data());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Tensor decode_blob(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 16 && std::memcmp(bytes.data(), "LMK1", 4) == 0, ErrorKind::kIo,
          "not an LMK1 blob (bad magic)");
  const std::uint8_t rank = bytes[4];
  require(rank == 3 || rank == 4, ErrorKind::kIo, "LMK1 blob rank must be 3 or 4, got " + std::to_string(rank));
  require(bytes[5] == kDtypeFloat32, ErrorKind::kIo, "LMK1 blob dtype tag unsupported");
  require(bytes.size() >= 16 + 4u * rank, ErrorKind::kIo, "LMK1 blob truncated in dims");
  Shape s;
  std::size_t at = 16;
  if (rank == 4) {
    s.frames = get_u32(bytes, at);
    at += 4;
  }
  s.channels = get_u32(bytes, at);
  s.height = get_u32(bytes, at + 4);
  s.width = get_u32(bytes, at + 8);
  at += 12;
  require(bytes.size() - at == s.size() * 4, ErrorKind::kIo,
          "LMK1 payload length does not match dims " + to_string(s));
  return Tensor(s, decode_f32(bytes.subspan(at)));
}

void write_blob(const std::filesystem::path& path, const Tensor& tensor) {
  const auto bytes = encode_blob(tensor);
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(f.good(), ErrorKind::kIo, "write failed: " + path.string());
}

Tensor read_blob(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_blob(bytes);
}

}  // namespace lmk
