// Copyright 2026 the opinion-game authors
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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "opiniongame/dynamics.hpp"
#include "opiniongame/network.hpp"
#include "opiniongame/scenario.hpp"
#include "opiniongame/version.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 data, 4 numerical/assumption failure.
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int run_command(const std::string& scenario_path, const std::string& out_dir,
                int threads) {
  opiniongame::Scenario scenario =
      opiniongame::parse_scenario(scenario_path);
  opiniongame::RunOutput out =
      opiniongame::run_scenario(scenario, out_dir, threads);
  for (const auto& f : out.files) {
    std::cout << "wrote " << f.string() << "\n";
  }
  return 0;
}

int validate_command(const std::string& dataset, const std::string& format,
                     bool directed, double w0, double theta, double z0) {
  opiniongame::Network net;
  if (format == "weighted") {
    net = opiniongame::load_weighted_network(dataset);
  } else {
    opiniongame::EdgeList edges =
        opiniongame::load_edge_list(dataset, directed);
    net = opiniongame::build_network(edges, w0, theta, z0);
  }
  auto violations = opiniongame::validate(net);
  std::cout << "nodes: " << net.n << "\n";
  std::cout << "arcs: " << net.w.nonZeros() << "\n";
  if (violations.empty()) {
    std::cout << "ok: all model invariants hold\n";
    return 0;
  }
  for (const auto& v : violations) {
    std::cout << "violation at node " << v.node << ": " << v.message << "\n";
  }
  std::cerr << violations.size() << " violation(s) found\n";
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase campaign investment experiments on opinion networks"};
  app.set_version_flag("--version", opiniongame::kVersion);
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  int threads = 0;
  CLI::App* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario file (key = value)")
      ->required();
  run->add_option("--out", out_dir, "Directory for CSVs and the manifest")
      ->required();
  run->add_option("--threads", threads,
                  "Worker threads (0 = all hardware threads)");

  std::string dataset, format = "edge-list";
  bool directed = false;
  double w0 = 0.5, theta = 0.2, z0 = 0.0;
  CLI::App* validate = app.add_subcommand(
      "validate", "Load a dataset and check every model invariant");
  validate->add_option("dataset", dataset, "Dataset file")->required();
  validate->add_option("--format", format, "edge-list (default) or weighted")
      ->check(CLI::IsMember({"edge-list", "weighted"}));
  validate->add_flag("--directed", directed,
                     "Treat edge-list pairs as one-directional");
  validate->add_option("--w0", w0, "Uniform self weight for edge-list builds");
  validate->add_option("--theta", theta,
                       "Uniform campaign weight for edge-list builds");
  validate->add_option("--z0", z0, "Uniform initial bias for edge-list builds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) {
      return run_command(scenario_path, out_dir, threads);
    }
    return validate_command(dataset, format, directed, w0, theta, z0);
  } catch (const opiniongame::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const opiniongame::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const opiniongame::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
