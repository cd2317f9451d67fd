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

#ifndef ESCLAB_SVG_PLOT_HPP
#define ESCLAB_SVG_PLOT_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "esclab/error.hpp"

namespace esclab {

class PlotError : public Error {
 public:
  using Error::Error;
};

struct PlotOptions {
  std::string title;
  std::string x_column = "t";
  std::size_t max_points = 2000;  // per polyline; longer series are decimated
  int width = 800;
  int height = 500;
};

/// Renders `columns` of every CSV against `x_column` into a single SVG 1.1
/// file: one polyline per (csv, column), axes with ticks, and a legend.
/// Output is byte-identical for identical input. Throws PlotError for an
/// unknown column and CsvError for a malformed row.
void emit_plot(const std::vector<std::filesystem::path>& csv_paths, const std::vector<std::string>& columns,
               const std::filesystem::path& out_path, const PlotOptions& options = {});

}  // namespace esclab

#endif  // ESCLAB_SVG_PLOT_HPP
