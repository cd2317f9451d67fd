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

#ifndef ESCLAB_CSV_HPP
#define ESCLAB_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "esclab/cost.hpp"
#include "esclab/error.hpp"
#include "esclab/integrate.hpp"

namespace esclab {

/// Malformed CSV input. `row()` is the 1-based line number in the file
/// (the header is row 1).
class CsvError : public Error {
 public:
  CsvError(const std::string& source, std::size_t row, const std::string& message);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<Vector> rows;

  /// Index of `name` in the header, or -1.
  long column(const std::string& name) const;
};

/// t,theta_1..theta_n,v_1..v_n,xi,J
std::vector<std::string> trajectory_header(std::size_t n);

/// Writes a flattened (theta, v, xi) trajectory with J(theta_hat) appended.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, const CostFunction& cost);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Numeric CSV with one header row. Every data row must have as many fields
/// as the header and every field must parse as a double.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace esclab

#endif  // ESCLAB_CSV_HPP
