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

// Strict reader for JSON config objects: every field must be consumed, so a
// typo or stale field is a config error instead of a silently ignored value.

#include <set>
#include <string>

#include <json.hpp>

#include "lmk/error.hpp"
#include "lmk/tensor.hpp"

namespace lmk::detail {

class Fields {
 public:
  Fields(const nlohmann::json& j, std::string context) : j_(j), context_(std::move(context)) {
    require(j.is_object(), ErrorKind::kConfig, context_ + ": expected a JSON object");
  }

  bool has(const std::string& name) const { return j_.contains(name); }

  const nlohmann::json& raw(const std::string& name) {
    require(j_.contains(name), ErrorKind::kConfig, context_ + "." + name + ": missing required field");
    used_.insert(name);
    return j_.at(name);
  }

  template <typename T>
  T need(const std::string& name) {
    return convert<T>(name, raw(name));
  }

  template <typename T>
  T get(const std::string& name, T fallback) {
    if (!j_.contains(name)) return fallback;
    return convert<T>(name, raw(name));
  }

  /// Throws on any field that was never read.
  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      require(used_.count(key) != 0, ErrorKind::kConfig, context_ + "." + key + ": unknown field");
    }
  }

 private:
  template <typename T>
  T convert(const std::string& name, const nlohmann::json& v) const {
    if constexpr (std::is_same_v<T, bool>) {
      require(v.is_boolean(), ErrorKind::kConfig, context_ + "." + name + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      require(v.is_number_integer() && (std::is_signed_v<T> || v.get<long long>() >= 0), ErrorKind::kConfig,
              context_ + "." + name + ": expected a nonnegative integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      require(v.is_number(), ErrorKind::kConfig, context_ + "." + name + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      require(v.is_string(), ErrorKind::kConfig, context_ + "." + name + ": expected a string");
    }
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kConfig, context_ + "." + name + ": " + e.what());
    }
  }

  const nlohmann::json& j_;
  std::string context_;
  std::set<std::string> used_;
};

/// [C,H,W] for a single frame, [T,C,H,W] otherwise.
inline nlohmann::json shape_to_json(const Shape& s) {
  if (s.frames == 1) return {s.channels, s.height, s.width};
  return {s.frames, s.channels, s.height, s.width};
}

inline Shape shape_from_json(const nlohmann::json& j, const std::string& context) {
  require(j.is_array() && (j.size() == 3 || j.size() == 4), ErrorKind::kConfig,
          context + ": expected [C,H,W] or [T,C,H,W]");
  std::vector<std::size_t> d;
  for (const auto& v : j) {
    require(v.is_number_integer() && v.get<long long>() > 0, ErrorKind::kConfig,
            context + ": dimensions must be positive integers");
    d.push_back(v.get<std::size_t>());
  }
  if (d.size() == 3) return {1, d[0], d[1], d[2]};
  return {d[0], d[1], d[2], d[3]};
}

}  // namespace lmk::detail
