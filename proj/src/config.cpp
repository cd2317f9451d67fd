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

#include "esclab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace esclab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

std::size_t column_of(std::string_view line, std::string_view part) {
  return static_cast<std::size_t>(part.data() - line.data()) + 1;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, std::size_t column,
                         const std::string& message)
    : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field)) {}

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == ';') continue;

    if (body.front() == '[') {
      const auto close = body.find(']');
      if (close == std::string_view::npos) {
        throw ConfigError(source, line_no, column_of(line, body) + body.size(), "expected ']'");
      }
      const std::string_view name = trim(body.substr(1, close - 1));
      if (!name.empty() && !valid_key(name)) {
        throw ConfigError(source, line_no, column_of(line, body) + 1, "invalid section name");
      }
      const std::string_view rest = trim(body.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') {
        throw ConfigError(source, line_no, column_of(line, rest), "unexpected text after section header");
      }
      section = name.empty() ? "" : std::string(name) + ".";
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source, line_no, column_of(line, body) + body.size(), "expected '=' after key");
    }
    const std::string_view key = trim(body.substr(0, eq));
    if (!valid_key(key)) {
      throw ConfigError(source, line_no, column_of(line, body), "invalid key '" + std::string(key) + "'");
    }
    std::string_view value = trim(body.substr(eq + 1));
    if (!value.empty() && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string_view::npos) {
        throw ConfigError(source, line_no, column_of(line, value) + value.size(), "unterminated string");
      }
      const std::string_view rest = trim(value.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') {
        throw ConfigError(source, line_no, column_of(line, rest), "unexpected text after string");
      }
      value = value.substr(1, close - 1);
    } else if (const auto hash = value.find('#'); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
    }
    if (value.empty()) {
      throw ConfigError(source, line_no, column_of(line, body) + body.size(), "missing value for '" +
                                                                                 std::string(key) + "'");
    }
    cfg.values_[section + std::string(key)] = std::string(value);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("--set", "override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string_view key = trim(assignment.substr(0, eq));
  std::string_view value = trim(assignment.substr(eq + 1));
  if (!valid_key(key)) throw ConfigError("--set", "invalid key '" + std::string(key) + "'");
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  if (value.empty()) throw ConfigError(std::string(key), "override has an empty value");
  values_[std::string(key)] = std::string(value);
}

void Config::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "required field is missing");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

namespace {

double to_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

double Config::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const std::string text = get_string(key);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return value;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string text = get_string(key);
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(key, "expected true/false, got '" + text + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  const std::string text = get_string(key);
  std::vector<std::string> out;
  std::string_view rest = text;
  for (;;) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (item.empty()) throw ConfigError(key, "empty list element");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

Vector Config::get_doubles(const std::string& key) const {
  Vector out;
  for (const auto& item : get_list(key)) out.push_back(to_double(key, item));
  return out;
}

}  // namespace esclab
