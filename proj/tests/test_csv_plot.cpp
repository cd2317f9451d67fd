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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "esclab/csv.hpp"
#include "esclab/dynamics.hpp"
#include "esclab/svg_plot.hpp"

namespace fs = std::filesystem;
using esclab::Vector;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "esclab_test_csv_plot";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

fs::path write_sample(const std::string& name, double scale) {
  esclab::Trajectory traj;
  for (int k = 0; k <= 50; ++k) {
    traj.times.push_back(0.1 * k);
    traj.states.push_back({scale * std::exp(-0.1 * k), -0.5 * scale, 0.81, 0.9, 0.1 * k});
  }
  const auto path = scratch(name);
  esclab::write_trajectory_csv(path, traj, esclab::builtin::quadratic({1.0, 2.0}));
  return path;
}

}  // namespace

TEST_CASE("trajectory header") {
  const auto h = esclab::trajectory_header(2);
  CHECK(h == std::vector<std::string>{"t", "theta_1", "theta_2", "v_1", "v_2", "xi", "J"});
}

TEST_CASE("trajectory CSV round trip") {
  const auto path = write_sample("round.csv", 2.0);
  const auto table = esclab::read_csv(path);
  CHECK(table.header == esclab::trajectory_header(2));
  REQUIRE(table.rows.size() == 51);
  CHECK(table.rows[10][0] == doctest::Approx(1.0));
  CHECK(table.rows[10][1] == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-11));
  const double th1 = table.rows[3][1], th2 = table.rows[3][2];
  CHECK(table.rows[3][6] == doctest::Approx(0.5 * th1 * th1 + th2 * th2).epsilon(1e-11));
  CHECK(table.column("xi") == 5);
  CHECK(table.column("nope") == -1);
  CHECK(slurp(path).find(';') == std::string::npos);
}

TEST_CASE("malformed CSV rows report the row number") {
  const auto path = scratch("bad.csv");
  std::ofstream(path) << "t,theta_1\n0,1\n0.1,abc\n";
  try {
    esclab::read_csv(path);
    FAIL("expected CsvError");
  } catch (const esclab::CsvError& e) {
    CHECK(e.row() == 3);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  std::ofstream(path) << "t,theta_1\n0,1\n0.1\n";
  try {
    esclab::read_csv(path);
    FAIL("expected CsvError");
  } catch (const esclab::CsvError& e) {
    CHECK(e.row() == 3);
  }
}

TEST_CASE("one selected column gives one polyline") {
  const auto csv = write_sample("one.csv", 1.0);
  const auto svg = scratch("one.svg");
  esclab::emit_plot({csv}, {"theta_1"}, svg);
  const std::string text = slurp(svg);
  CHECK(count(text, "<polyline") == 1);
  CHECK(text.rfind("<?xml", 0) == 0);
  CHECK(text.find("version=\"1.1\"") != std::string::npos);
  CHECK(text.find("id=\"legend\"") != std::string::npos);
  CHECK(text.find("id=\"axes\"") != std::string::npos);
}

TEST_CASE("three runs give three polylines with distinct legend entries") {
  const std::vector<fs::path> csvs = {write_sample("run_1.csv", 1.0), write_sample("run_2.csv", 2.0),
                                      write_sample("run_3.csv", 3.0)};
  const auto svg = scratch("three.svg");
  esclab::emit_plot(csvs, {"theta_1"}, svg);
  const std::string text = slurp(svg);
  CHECK(count(text, "<polyline") == 3);
  CHECK(text.find(">run_1:theta_1<") != std::string::npos);
  CHECK(text.find(">run_2:theta_1<") != std::string::npos);
  CHECK(text.find(">run_3:theta_1<") != std::string::npos);
}

TEST_CASE("plot output is deterministic") {
  const auto csv = write_sample("det.csv", 1.5);
  const auto a = scratch("det_a.svg"), b = scratch("det_b.svg");
  esclab::PlotOptions opt;
  opt.title = "x < y & z";
  esclab::emit_plot({csv}, {"theta_1", "xi"}, a, opt);
  esclab::emit_plot({csv}, {"theta_1", "xi"}, b, opt);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("x &lt; y &amp; z") != std::string::npos);
}

TEST_CASE("unknown columns are rejected") {
  const auto csv = write_sample("unk.csv", 1.0);
  CHECK_THROWS_AS(esclab::emit_plot({csv}, {"theta_9"}, scratch("unk.svg")), esclab::PlotError);
}

TEST_CASE("long series are decimated but keep their end point") {
  esclab::Trajectory traj;
  for (int k = 0; k <= 10000; ++k) {
    traj.times.push_back(k);
    traj.states.push_back({static_cast<double>(k), 0.0, 0.0});
  }
  const auto csv = scratch("long.csv");
  esclab::write_trajectory_csv(csv, traj, esclab::builtin::quartic());
  const auto svg = scratch("long.svg");
  esclab::PlotOptions opt;
  opt.max_points = 100;
  esclab::emit_plot({csv}, {"theta_1"}, svg, opt);
  const std::string text = slurp(svg);
  const auto start = text.find("points=\"");
  const auto end = text.find('"', start + 8);
  const std::string pts = text.substr(start + 8, end - start - 8);
  CHECK(count(pts, ",") <= 101);
  CHECK(pts.substr(pts.rfind(' ') + 1) == "620.00,40.00");
}
