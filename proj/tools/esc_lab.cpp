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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esclab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"RMSprop extremum seeking lab", "esc-lab"};
  esclab::CliRequest request;
  std::string config;
  std::string out_dir;

  app.add_option("mode", request.mode, "simulate | average | compare | quadratic | converge | lyapunov | plot")
      ->required();
  app.add_option("--config", config, "Experiment config file")->required();
  app.add_option("--set", request.overrides, "Override a config field, key=value (repeatable)");
  app.add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return esclab::kExitConfig;
  }

  request.config = config;
  request.out_dir = out_dir;
  return esclab::execute(request, std::cout, std::cerr);
}
