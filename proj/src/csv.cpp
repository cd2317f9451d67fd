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

#include "esclab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace esclab {

CsvError::CsvError(const std::string& source, std::size_t row, const std::string& message)
    : Error(source + ": row " + std::to_string(row) + ": " + message), row_(row) {}

long CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<long>(i);
  }
  return -1;
}

std::vector<std::string> trajectory_header(std::size_t n) {
  std::vector<std::string> h{"t"};
  for (std::size_t i = 1; i <= n; ++i) h.push_back("theta_" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) h.push_back("v_" + std::to_string(i));
  h.push_back("xi");
  h.push_back("J");
  return h;
}

namespace {

void append_number(std::string& line, double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.12g", x);
  line.append(buf, static_cast<std::size_t>(len));
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string line;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) line += ',';
    line += items[i];
  }
  return line;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, const CostFunction& cost) {
  const std::size_t n = cost.dim();
  std::ofstream out = open_for_write(path);
  out << join(trajectory_header(n)) << '\n';
  std::string line;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const Vector& x = traj.states[j];
    if (x.size() != 2 * n + 1) throw DimensionError("trajectory state", 2 * n + 1, x.size());
    line.clear();
    append_number(line, traj.times[j]);
    for (double value : x) {
      line += ',';
      append_number(line, value);
    }
    line += ',';
    append_number(line, cost.value(std::span<const double>(x.data(), n)));
    out << line << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out = open_for_write(path);
  out << join(table.header) << '\n';
  std::string line;
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      append_number(line, row[i]);
    }
    out << line << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string source = path.string();
  if (!in) throw CsvError(source, 0, "cannot open file");

  CsvTable table;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (row == 1) {
      for (auto f : fields) {
        if (f.empty()) throw CsvError(source, row, "empty column name");
        table.header.emplace_back(f);
      }
      continue;
    }
    if (line.empty()) throw CsvError(source, row, "empty row");
    if (fields.size() != table.header.size()) {
      throw CsvError(source, row, "expected " + std::to_string(table.header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
    }
    Vector values(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto f = fields[i];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw CsvError(source, row, "field " + std::to_string(i + 1) + " is not a number: '" + std::string(f) + "'");
      }
    }
    table.rows.push_back(std::move(values));
  }
  if (row == 0) throw CsvError(source, 1, "missing header");
  return table;
}

}  // namespace esclab
