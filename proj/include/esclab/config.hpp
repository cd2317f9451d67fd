// Copyright 2026 The esc-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESCLAB_CONFIG_HPP
#define ESCLAB_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esclab/error.hpp"

namespace esclab {

/// Config parse or validation failure. Parse errors carry a 1-based line and
/// column; validation errors name the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);
  ConfigError(std::string field, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
  std::string field_;
};

/// Flat key/value configuration.
///
///   # comment
///   mode = simulate
///   dither.omega = 10
///   [gains]            # prefixes following keys with "gains."
///   k = 1
///   omega_l = 0.25, 0.25
///
/// Values run to the end of the line (a trailing `# ...` is stripped unless
/// the value is double-quoted). Later assignments replace earlier ones.
class Config {
 public:
  static Config parse(std::string_view text, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Apply a command-line override "key=value".
  void set(std::string_view assignment);
  void set(const std::string& key, std::string value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;
  Vector get_doubles(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace esclab

#endif  // ESCLAB_CONFIG_HPP
