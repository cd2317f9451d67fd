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

#include "esclab/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "esclab/averaging.hpp"
#include "esclab/csv.hpp"
#include "esclab/integrate.hpp"
#include "esclab/kernels.hpp"
#include "esclab/quadratic.hpp"
#include "esclab/svg_plot.hpp"

namespace esclab {

namespace {

constexpr std::string_view kModeNames[] = {"simulate", "average", "compare", "quadratic",
                                           "converge", "lyapunov", "plot"};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode",
      "cost.builtin", "cost.expression", "cost.dim", "cost.curvature", "cost.hessian", "cost.j_opt",
      "cost.shift", "cost.minimizer",
      "dither.amplitudes", "dither.rates", "dither.omega",
      "gains.k", "gains.epsilon", "gains.omega_l", "gains.omega_xi",
      "init.theta", "init.v", "init.xi",
      "sim.t0", "sim.t_end", "sim.step", "sim.stride", "sim.algorithm",
      "average.nodes",
      "converge.theta", "converge.a0",
      "lyapunov.points", "lyapunov.box", "lyapunov.refine", "lyapunov.tol", "lyapunov.seed",
      "plot.csv", "plot.columns", "plot.output", "plot.title",
      "output.prefix", "output.svg",
  };
  return keys;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string format_vector(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

// A list of length n, or a single value repeated n times.
Vector broadcast(const Config& cfg, const std::string& key, std::size_t n) {
  Vector v = cfg.get_doubles(key);
  if (v.size() == 1 && n > 1) v.assign(n, v[0]);
  if (v.size() != n) {
    throw ConfigError(key, "expected " + std::to_string(n) + " values, got " + std::to_string(v.size()));
  }
  return v;
}

double positive(const Config& cfg, const std::string& key) {
  const double x = cfg.get_double(key);
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(key, "must be a positive finite number");
  return x;
}

std::size_t positive_count(const Config& cfg, const std::string& key, long fallback) {
  const long x = cfg.get_int(key, fallback);
  if (x <= 0) throw ConfigError(key, "must be a positive integer");
  return static_cast<std::size_t>(x);
}

CostFunction build_cost(const Config& cfg) {
  const bool has_builtin = cfg.has("cost.builtin");
  const bool has_expr = cfg.has("cost.expression");
  if (!has_builtin && !has_expr) {
    throw ConfigError("cost.builtin", "required field is missing (set cost.builtin or cost.expression)");
  }
  if (has_builtin && has_expr) {
    throw ConfigError("cost.expression", "cannot be combined with cost.builtin");
  }

  if (has_expr) {
    const std::size_t n = positive_count(cfg, "cost.dim", 1);
    CostFunction cost = [&] {
      try {
        return parse_cost(cfg.get_string("cost.expression"), n);
      } catch (const ParseError& e) {
        throw ConfigError("cost.expression", e.what());
      }
    }();
    if (cfg.has("cost.minimizer")) cost = cost.with_minimizer(broadcast(cfg, "cost.minimizer", n));
    return cost;
  }

  const std::string name = cfg.get_string("cost.builtin");
  const double j_opt = cfg.get_double("cost.j_opt", 0.0);
  try {
    if (name == "quadratic") {
      if (cfg.has("cost.hessian")) {
        const std::size_t n = positive_count(cfg, "cost.dim", 1);
        const Vector shift = cfg.has("cost.shift") ? broadcast(cfg, "cost.shift", n) : Vector{};
        try {
          return builtin::quadratic_full(n, cfg.get_doubles("cost.hessian"), j_opt, shift);
        } catch (const Error& e) {
          throw ConfigError("cost.hessian", e.what());
        }
      }
      if (!cfg.has("cost.curvature")) throw ConfigError("cost.curvature", "required field is missing");
      const Vector curvature = cfg.get_doubles("cost.curvature");
      for (double h : curvature) {
        if (!(h > 0.0)) throw ConfigError("cost.curvature", "every curvature must be positive");
      }
      const Vector shift = cfg.has("cost.shift") ? broadcast(cfg, "cost.shift", curvature.size()) : Vector{};
      return builtin::quadratic(curvature, j_opt, shift);
    }
    if (name == "quartic") {
      if (cfg.has("cost.shift")) {
        const std::size_t n = cfg.has("cost.dim") ? positive_count(cfg, "cost.dim", 1) : cfg.get_doubles("cost.shift").size();
        return builtin::shifted_quartic(broadcast(cfg, "cost.shift", n));
      }
      const std::size_t n = positive_count(cfg, "cost.dim", 1);
      return n == 1 ? builtin::quartic() : builtin::shifted_quartic(Vector(n, 0.0));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("cost." + name, e.what());
  }
  throw ConfigError("cost.builtin", "unknown builtin '" + name + "' (expected quadratic or quartic)");
}

DitherConfig build_dither(const Config& cfg, std::size_t n) {
  const Vector amplitudes = broadcast(cfg, "dither.amplitudes", n);
  std::vector<int> rates;
  if (cfg.has("dither.rates")) {
    for (const auto& item : cfg.get_list("dither.rates")) {
      try {
        std::size_t used = 0;
        rates.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("dither.rates", "expected integers, got '" + item + "'");
      }
    }
  } else {
    for (std::size_t i = 1; i <= n; ++i) rates.push_back(static_cast<int>(i));
  }
  const double omega = cfg.get_double("dither.omega");
  try {
    return DitherConfig(amplitudes, rates, omega);
  } catch (const DitherError& e) {
    std::string field = "dither.amplitudes";
    switch (e.code()) {
      case DitherErrc::nonpositive_rate:
      case DitherErrc::duplicate_rate:
        field = "dither.rates";
        break;
      case DitherErrc::nonpositive_omega:
        field = "dither.omega";
        break;
      case DitherErrc::size_mismatch:
        field = "dither.rates";
        break;
      case DitherErrc::zero_amplitude:
        break;
    }
    throw ConfigError(field, e.what());
  }
}

EscParams build_params(const Config& cfg, std::size_t n) {
  EscParams p;
  p.k = positive(cfg, "gains.k");
  p.epsilon = positive(cfg, "gains.epsilon");
  p.omega_l = broadcast(cfg, "gains.omega_l", n);
  for (double w : p.omega_l) {
    if (!(w > 0.0)) throw ConfigError("gains.omega_l", "every entry must be positive");
  }
  p.omega_xi = positive(cfg, "gains.omega_xi");
  return p;
}

// Entries: a number, "y0", or "<number>*y0".
Vector resolve_xi0(const Config& cfg, double y0) {
  if (!cfg.has("init.xi")) return {0.0};
  Vector out;
  for (const auto& item : cfg.get_list("init.xi")) {
    std::string text = item;
    text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
    double factor = 1.0;
    bool uses_y0 = false;
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "y0") == 0) {
      uses_y0 = true;
      text.resize(text.size() - 2);
      if (!text.empty()) {
        if (text.back() != '*') throw ConfigError("init.xi", "cannot parse '" + item + "'");
        text.pop_back();
      }
    }
    if (!text.empty()) {
      char* end = nullptr;
      errno = 0;
      factor = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size() || errno != 0) {
        throw ConfigError("init.xi", "cannot parse '" + item + "'");
      }
    }
    out.push_back(uses_y0 ? factor * y0 : factor);
  }
  return out;
}

}  // namespace

const char* to_string(Mode mode) noexcept { return kModeNames[static_cast<int>(mode)].data(); }

std::optional<Mode> parse_mode(std::string_view name) noexcept {
  for (std::size_t i = 0; i < std::size(kModeNames); ++i) {
    if (kModeNames[i] == name) return static_cast<Mode>(i);
  }
  return std::nullopt;
}

ExperimentConfig load_experiment(const Config& cfg, Mode mode, const std::filesystem::path& base_dir) {
  for (const auto& key : cfg.keys()) {
    if (!known_keys().count(key)) throw ConfigError(key, "unknown field");
  }
  if (cfg.has("mode")) {
    const auto declared = cfg.get_string("mode");
    if (!parse_mode(declared)) throw ConfigError("mode", "unknown mode '" + declared + "'");
  }

  ExperimentConfig exp;
  exp.mode = mode;
  exp.prefix = cfg.get_string("output.prefix", "run");
  if (exp.prefix.empty() || exp.prefix.find('/') != std::string::npos) {
    throw ConfigError("output.prefix", "must be a plain file name prefix");
  }
  exp.svg = cfg.get_bool("output.svg", false);

  if (mode == Mode::plot) {
    if (!cfg.has("plot.csv")) throw ConfigError("plot.csv", "required field is missing");
    for (const auto& p : cfg.get_list("plot.csv")) {
      std::filesystem::path path(p);
      exp.plot_csv.push_back(path.is_absolute() || base_dir.empty() ? path : base_dir / path);
    }
    if (!cfg.has("plot.columns")) throw ConfigError("plot.columns", "required field is missing");
    exp.plot_columns = cfg.get_list("plot.columns");
    exp.plot_output = cfg.get_string("plot.output", "plot.svg");
    exp.plot_title = cfg.get_string("plot.title", "");
    return exp;
  }

  exp.cost = build_cost(cfg);
  const std::size_t n = exp.cost->dim();

  if (mode == Mode::quadratic) {
    if (cfg.get_string("cost.builtin", "") != "quadratic" || cfg.has("cost.hessian")) {
      throw ConfigError("cost.builtin", "quadratic mode needs cost.builtin = quadratic with cost.curvature");
    }
    exp.params = build_params(cfg, n);
    const Vector amplitudes = broadcast(cfg, "dither.amplitudes", n);
    for (double a : amplitudes) {
      if (a == 0.0 || !std::isfinite(a)) throw ConfigError("dither.amplitudes", "amplitudes must be nonzero");
    }
    exp.quad_curvature = cfg.get_doubles("cost.curvature");
    exp.quad_amplitudes = amplitudes;
    exp.quad_j_opt = cfg.get_double("cost.j_opt", 0.0);
    return exp;
  }

  exp.dither = build_dither(cfg, n);
  exp.nodes = static_cast<std::size_t>(cfg.get_int("average.nodes", 0));
  if (cfg.get_int("average.nodes", 0) < 0) throw ConfigError("average.nodes", "must be nonnegative");
  if (exp.nodes != 0 && exp.nodes < 8 * static_cast<std::size_t>(exp.dither->max_rate())) {
    throw ConfigError("average.nodes", "needs at least 8 * max rate nodes");
  }

  if (mode == Mode::converge) {
    exp.converge_theta = broadcast(cfg, "converge.theta", n);
    exp.converge_a0 = cfg.get_doubles("converge.a0");
    for (std::size_t i = 0; i < exp.converge_a0.size(); ++i) {
      if (!(exp.converge_a0[i] > 0.0)) throw ConfigError("converge.a0", "entries must be positive");
      if (i > 0 && !(exp.converge_a0[i] < exp.converge_a0[i - 1])) {
        throw ConfigError("converge.a0", "entries must be strictly decreasing");
      }
    }
    return exp;
  }

  exp.params = build_params(cfg, n);
  exp.theta0 = broadcast(cfg, "init.theta", n);
  exp.v0 = broadcast(cfg, "init.v", n);
  for (double v : exp.v0) {
    if (!(v >= 0.0)) throw ConfigError("init.v", "entries must be nonnegative");
  }
  exp.t0 = cfg.get_double("sim.t0", 0.0);
  exp.t_end = cfg.get_double("sim.t_end");
  if (!(exp.t_end > exp.t0)) throw ConfigError("sim.t_end", "must exceed sim.t0");
  const std::string step = cfg.get_string("sim.step", "auto");
  if (step != "auto") {
    exp.step = positive(cfg, "sim.step");
  }
  exp.stride = positive_count(cfg, "sim.stride", 1);
  const std::string algorithm = cfg.get_string("sim.algorithm", "rmspesc");
  if (algorithm != "rmspesc" && algorithm != "gesc") {
    throw ConfigError("sim.algorithm", "expected rmspesc or gesc, got '" + algorithm + "'");
  }
  exp.gesc = algorithm == "gesc";
  if (exp.gesc && mode != Mode::simulate) {
    throw ConfigError("sim.algorithm", "gesc is only available in simulate mode");
  }

  Vector probe = exp.theta0;
  const Vector s0 = exp.dither->value(exp.t0);
  for (std::size_t i = 0; i < n; ++i) probe[i] += s0[i];
  exp.xi0 = resolve_xi0(cfg, exp.cost->value(probe));

  if (mode == Mode::lyapunov) {
    exp.level.points_per_axis = positive_count(cfg, "lyapunov.points", 401);
    exp.level.refine_iterations = positive_count(cfg, "lyapunov.refine", 80);
    exp.level.nodes = exp.nodes;
    exp.level.seed = static_cast<std::uint64_t>(cfg.get_int("lyapunov.seed", 0x5eed));
    if (cfg.has("lyapunov.box")) exp.level.box = Box::symmetric(n, positive(cfg, "lyapunov.box"));
    const std::string tol = cfg.get_string("lyapunov.tol", "auto");
    if (tol != "auto") exp.lyapunov_tol = positive(cfg, "lyapunov.tol");
  }
  return exp;
}

namespace {

struct Runner {
  const ExperimentConfig& exp;
  const std::filesystem::path& out_dir;
  std::ostream& report;
  RunOutcome outcome;

  std::filesystem::path file(const std::string& name) {
    auto path = out_dir / name;
    outcome.files.push_back(path);
    return path;
  }

  double step() const { return exp.step > 0.0 ? exp.step : dither_step_limit(*exp.dither); }

  EscState initial(std::size_t variant) const { return EscState{exp.theta0, exp.v0, exp.xi0.at(variant)}; }

  Trajectory integrate(OdeRhs rhs, const EscState& x0, const std::string& label) const {
    const StateLayout layout{exp.cost->dim()};
    return integrate_fixed(rhs, x0.flatten(), exp.t0, exp.t_end, step(), exp.stride, layout.v_range(), label);
  }

  void maybe_plot(const std::vector<std::filesystem::path>& csvs, const std::string& title) {
    if (!exp.svg) return;
    std::vector<std::string> cols;
    for (std::size_t i = 1; i <= exp.cost->dim(); ++i) cols.push_back("theta_" + std::to_string(i));
    PlotOptions opt;
    opt.title = title;
    const auto path = file(exp.prefix + ".svg");
    emit_plot(csvs, cols, path, opt);
    report << "plot: " << path.string() << '\n';
  }

  void trajectories(bool average) {
    std::vector<std::filesystem::path> csvs;
    for (std::size_t k = 0; k < exp.xi0.size(); ++k) {
      const EscState x0 = initial(k);
      OdeRhs rhs = average ? make_average_system(exp.params, *exp.cost, *exp.dither, exp.nodes)
                   : exp.gesc ? make_gesc_system(exp.params, *exp.cost, *exp.dither)
                              : make_rmspesc_system(exp.params, *exp.cost, *exp.dither);
      const std::string label = average ? "average" : exp.gesc ? "gesc" : "rmspesc";
      const Trajectory traj = integrate(std::move(rhs), x0, label);
      const auto path = file(exp.prefix + (average ? "_average_" : "_") + std::to_string(k + 1) + ".csv");
      write_trajectory_csv(path, traj, *exp.cost);
      csvs.push_back(path);
      const EscState end = EscState::unflatten(traj.back(), exp.cost->dim());
      report << label << " run " << k + 1 << ": xi0=" << format_double(x0.xi) << " theta(" << format_double(exp.t_end)
             << ")=" << format_vector(end.theta_hat) << " steps=" << traj.steps
             << " clamp_events=" << traj.clamp_events << " -> " << path.string() << '\n';
    }
    maybe_plot(csvs, average ? "average system" : exp.gesc ? "GESC" : "RMSpESC");
  }

  void compare() {
    const std::size_t n = exp.cost->dim();
    const EscState x0 = initial(0);
    const Trajectory full = integrate(make_rmspesc_system(exp.params, *exp.cost, *exp.dither), x0, "rmspesc");
    const Trajectory avg =
        integrate(make_average_system(exp.params, *exp.cost, *exp.dither, exp.nodes), x0, "average");
    const auto full_path = file(exp.prefix + "_full.csv");
    const auto avg_path = file(exp.prefix + "_average.csv");
    write_trajectory_csv(full_path, full, *exp.cost);
    write_trajectory_csv(avg_path, avg, *exp.cost);

    Vector gap(n, 0.0);
    Vector at(n, exp.t0);
    for (std::size_t j = 0; j < full.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(full.states[j][i] - avg.states[j][i]);
        if (d > gap[i]) gap[i] = d, at[i] = full.times[j];
      }
    }
    std::ostringstream summary;
    summary << "xi0 = " << format_double(x0.xi) << '\n';
    summary << "step = " << format_double(full.step) << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      summary << "sup|theta_" << i + 1 << " - theta_bar_" << i + 1 << "| = " << format_double(gap[i])
              << " at t = " << format_double(at[i]) << '\n';
    }
    summary << "sup_theta_gap = " << format_double(*std::max_element(gap.begin(), gap.end())) << '\n';
    const auto txt = file(exp.prefix + "_deviation.txt");
    std::ofstream(txt) << summary.str();
    report << summary.str() << "-> " << full_path.string() << ", " << avg_path.string() << ", " << txt.string()
           << '\n';
    maybe_plot({full_path, avg_path}, "RMSpESC vs average");
  }

  void quadratic() {
    const Vector& curvature = exp.quad_curvature;
    const Vector& amplitudes = exp.quad_amplitudes;
    const double j_opt = exp.quad_j_opt;
    std::ostringstream table;
    char buf[160];
    for (std::size_t ch = 0; ch < curvature.size(); ++ch) {
      const QuadraticModel model{curvature[ch], j_opt, amplitudes[ch]};
      EscParams p = exp.params;
      p.omega_l = {exp.params.omega_l[ch]};
      const JacobianReport r = quad_jacobian(model, p);
      const QuadraticEquilibrium eq = quad_equilibrium(model);
      if (curvature.size() > 1) table << "channel " << ch + 1 << '\n';
      std::snprintf(buf, sizeof buf, "model: H=%.10g J*=%.10g a=%.10g\n", model.curvature, model.j_opt,
                    model.amplitude);
      table << buf;
      std::snprintf(buf, sizeof buf, "gains: k=%.10g epsilon=%.10g omega_l=%.10g omega_xi=%.10g\n", p.k, p.epsilon,
                    p.omega_l[0], p.omega_xi);
      table << buf;
      std::snprintf(buf, sizeof buf, "equilibrium: theta*=%.10g xi*=%.10g v*=%.10g\n", eq.theta_star, eq.xi_star,
                    eq.v_star);
      table << buf;
      table << "jacobian (rows/cols: theta_err, xi_err, v_err)\n";
      for (const auto& row : r.matrix) {
        std::snprintf(buf, sizeof buf, "  %14.8f %14.8f %14.8f\n", row[0], row[1], row[2]);
        table << buf;
      }
      table << "eigenvalues:";
      for (double e : r.eigenvalues) {
        std::snprintf(buf, sizeof buf, " %.8g", e);
        table << buf;
      }
      table << "\nhurwitz: " << (r.hurwitz ? "yes" : "no") << '\n';
      std::snprintf(buf, sizeof buf, "steep limit (-4k/|a|): %.8g\nflat slope (-k/epsilon): %.8g\n", r.steep_limit,
                    r.flat_slope);
      table << buf;
    }
    const auto path = file(exp.prefix + "_jacobian.txt");
    std::ofstream(path) << table.str();
    report << table.str() << "-> " << path.string() << '\n';
  }

  void converge() {
    const auto rows = convergence_sweep(*exp.cost, *exp.dither, exp.converge_theta, exp.converge_a0, exp.nodes);
    CsvTable table{{"a0", "grad_error", "v_star_max"}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      table.rows.push_back({r.a0, r.grad_error, r.v_star_max});
      report << "a0=" << format_double(r.a0) << " grad_error=" << format_double(r.grad_error)
             << " v*_max=" << format_double(r.v_star_max);
      if (i > 0 && r.grad_error > 0.0) report << " ratio=" << format_double(rows[i - 1].grad_error / r.grad_error);
      report << '\n';
    }
    const auto path = file(exp.prefix + "_converge.csv");
    write_csv(path, table);
    report << "-> " << path.string() << '\n';
  }

  void lyapunov() {
    const std::size_t n = exp.cost->dim();
    const Vector start = exp.cost->minimizer() ? *exp.cost->minimizer() : exp.theta0;
    EquilibriumOptions opts;
    opts.nodes = exp.nodes;
    const Equilibrium eq = equilibrium(*exp.cost, *exp.dither, start, opts);
    const EscState x0 = initial(0);
    const Trajectory avg =
        integrate(make_average_system(exp.params, *exp.cost, *exp.dither, exp.nodes), x0, "average");
    const DescentReport descent = monitor_descent(avg, *exp.cost, *exp.dither, eq, exp.level, exp.lyapunov_tol);
    const FilterBoundReport bounds = check_filter_bounds(avg, *exp.cost, *exp.dither, eq, exp.level);

    CsvTable table;
    table.header = {"t", "V", "V_theta", "V_xi"};
    for (std::size_t i = 1; i <= n; ++i) table.header.push_back("V_v_" + std::to_string(i));
    for (std::size_t j = 0; j < descent.times.size(); ++j) {
      const auto& term = descent.terms[j];
      Vector row{descent.times[j], descent.values[j], term.v_theta, term.v_xi};
      row.insert(row.end(), term.v_v.begin(), term.v_v.end());
      table.rows.push_back(std::move(row));
    }
    const auto path = file(exp.prefix + "_lyapunov.csv");
    write_csv(path, table);

    report << "equilibrium: theta*=" << format_vector(eq.theta_star) << " xi*=" << format_double(eq.xi_star)
           << " v*=" << format_vector(eq.v_star) << '\n';
    report << "descent: " << (descent.pass ? "PASS" : "FAIL") << " V(0)=" << format_double(descent.values.front())
           << " V(end)=" << format_double(descent.values.back()) << " tol=" << format_double(descent.tol);
    if (descent.first_violation) {
      report << " first_violation_t=" << format_double(descent.times[*descent.first_violation]);
    }
    report << '\n';
    report << "filter bounds: " << (bounds.pass ? "PASS" : "FAIL") << " max|xi_err|="
           << format_double(bounds.max_xi_err) << " <= " << format_double(bounds.xi_bound)
           << " max|v_err|=" << format_vector(bounds.max_v_err) << " <= " << format_vector(bounds.v_bounds) << '\n';
    report << "-> " << path.string() << '\n';
  }

  void plot() {
    PlotOptions opt;
    opt.title = exp.plot_title;
    const auto path = file(exp.plot_output);
    emit_plot(exp.plot_csv, exp.plot_columns, path, opt);
    report << "plot: " << path.string() << '\n';
  }
};

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& exp, const std::filesystem::path& out_dir, std::ostream& report) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  Runner run{exp, out_dir, report, {}};
  switch (exp.mode) {
    case Mode::simulate: run.trajectories(false); break;
    case Mode::average: run.trajectories(true); break;
    case Mode::compare: run.compare(); break;
    case Mode::quadratic: run.quadratic(); break;
    case Mode::converge: run.converge(); break;
    case Mode::lyapunov: run.lyapunov(); break;
    case Mode::plot: run.plot(); break;
  }
  return run.outcome;
}

int execute(const CliRequest& request, std::ostream& out, std::ostream& err) {
  const auto mode = parse_mode(request.mode);
  if (!mode) {
    err << "error: unknown mode '" << request.mode << "'\n";
    return kExitConfig;
  }
  if (const char* env = std::getenv("ESC_LAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long threads = std::strtol(env, &end, 10);
    if (*end != '\0' || threads <= 0 || threads > 4096) {
      err << "error: ESC_LAB_THREADS must be a positive integer, got '" << env << "'\n";
      return kExitConfig;
    }
    set_thread_limit(static_cast<int>(threads));
  }

  ExperimentConfig exp;
  try {
    Config cfg = Config::load(request.config);
    for (const auto& o : request.overrides) cfg.set(o);
    exp = load_experiment(cfg, *mode, request.out_dir);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    run_experiment(exp, request.out_dir, out);
  } catch (const CsvError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PlotError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace esclab
