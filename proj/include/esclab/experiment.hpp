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

#ifndef ESCLAB_EXPERIMENT_HPP
#define ESCLAB_EXPERIMENT_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esclab/config.hpp"
#include "esclab/cost.hpp"
#include "esclab/dynamics.hpp"
#include "esclab/lyapunov.hpp"
#include "esclab/signals.hpp"

namespace esclab {

enum class Mode { simulate, average, compare, quadratic, converge, lyapunov, plot };

const char* to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view name) noexcept;

/// Process exit codes of the CLI.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

/// Validated, fully resolved experiment. Fields a mode does not use stay at
/// their defaults. See docs/config_schema.md for the key names.
struct ExperimentConfig {
  Mode mode = Mode::simulate;

  std::optional<CostFunction> cost;
  std::optional<DitherConfig> dither;
  EscParams params;

  Vector theta0;
  Vector v0;
  Vector xi0;  // one run per entry; "y0" terms resolved to J(theta0 + s(t0))

  double t0 = 0.0;
  double t_end = 0.0;
  double step = 0.0;  // 0: dither_step_limit
  std::size_t stride = 1;
  bool gesc = false;  // sim.algorithm = gesc
  std::size_t nodes = 0;

  Vector converge_theta;
  Vector converge_a0;

  Vector quad_curvature;   // quadratic mode, per channel
  Vector quad_amplitudes;  // quadratic mode, per channel
  double quad_j_opt = 0.0;

  LevelSpec level;
  double lyapunov_tol = -1.0;

  std::vector<std::filesystem::path> plot_csv;
  std::vector<std::string> plot_columns;
  std::string plot_output = "plot.svg";
  std::string plot_title;

  std::string prefix = "run";
  bool svg = false;
};

/// Validates `cfg` for `mode`. Throws ConfigError naming the first bad field.
/// Relative plot.csv paths resolve against `base_dir` (the CLI passes the
/// output directory).
ExperimentConfig load_experiment(const Config& cfg, Mode mode, const std::filesystem::path& base_dir = {});

struct RunOutcome {
  std::vector<std::filesystem::path> files;  // written, in order
};

/// Runs a validated experiment, writing into `out_dir` (created if needed)
/// and a human-readable report to `report`.
RunOutcome run_experiment(const ExperimentConfig& exp, const std::filesystem::path& out_dir, std::ostream& report);

struct CliRequest {
  std::string mode;
  std::filesystem::path config;
  std::vector<std::string> overrides;  // "key=value"
  std::filesystem::path out_dir;
};

/// Load, override, validate, run. Maps failures to ExitCode and prints the
/// reason to `err`. Honours ESC_LAB_THREADS.
int execute(const CliRequest& request, std::ostream& out, std::ostream& err);

}  // namespace esclab

#endif  // ESCLAB_EXPERIMENT_HPP
