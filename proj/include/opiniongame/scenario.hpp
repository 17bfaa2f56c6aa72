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

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "opiniongame/csv.hpp"
#include "opiniongame/dynamics.hpp"
#include "opiniongame/errors.hpp"
#include "opiniongame/game.hpp"
#include "opiniongame/network.hpp"
#include "opiniongame/single_camp.hpp"
#include "opiniongame/version.hpp"

namespace opiniongame {

inline const std::vector<std::string>& experiment_tags() {
  static const std::vector<std::string> tags = {
      "BUDGET_CURVE",      "W0_SWEEP",       "MYOPIC_COMPARE",
      "HEURISTIC_COMPARE", "PAIR_HISTOGRAM", "PHASEWISE_DUMP",
      "EQUILIBRIUM_SWEEP", "DEVIATION"};
  return tags;
}

// One experiment run: which dataset to load, how to parameterize the
// network, and which figure-style experiment to produce.
struct Scenario {
  std::filesystem::path dataset;
  std::string format = "edge-list";  // or "weighted"
  bool directed = false;
  std::string experiment;
  double kg = 0.0;
  double kb = 0.0;
  std::vector<double> w0_sweep = {0.5};
  std::vector<double> z0_values = {0.0};
  double theta = 0.2;
  unsigned long long seed = 42;
};

struct RunOutput {
  std::vector<std::filesystem::path> files;  // CSVs, then the manifest
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  size_t last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& raw, const std::string& key) {
  try {
    size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw UsageError("scenario field '" + key + "': bad number '" + raw + "'");
  }
}

inline std::vector<double> parse_list(const std::string& raw,
                                      const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw UsageError("scenario field '" + key + "': empty list entry");
    }
    out.push_back(parse_double(item, key));
  }
  if (out.empty()) {
    throw UsageError("scenario field '" + key + "' must not be empty");
  }
  return out;
}

inline std::uint64_t fnv1a_hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset: " + path.string());
  std::uint64_t hash = 14695981039346656037ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return hash;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

inline std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace detail

// Parses the flat "key = value" scenario format. '#' lines are comments,
// lists are comma separated, unknown or duplicate keys are errors. Relative
// dataset paths resolve against the scenario file's directory.
inline Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario: " + path.string());

  Scenario sc;
  std::set<std::string> seen;
  bool have_dataset = false, have_experiment = false, have_kg = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = detail::trim(line);
    if (text.empty() || text[0] == '#') continue;
    size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    std::string key = detail::trim(text.substr(0, eq));
    std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    if (!seen.insert(key).second) {
      throw UsageError("duplicate scenario key '" + key + "'");
    }
    if (key == "dataset") {
      std::filesystem::path p(value);
      sc.dataset = p.is_absolute() ? p : path.parent_path() / p;
      have_dataset = true;
    } else if (key == "format") {
      if (value != "edge-list" && value != "weighted") {
        throw UsageError("scenario field 'format' must be edge-list or weighted");
      }
      sc.format = value;
    } else if (key == "directed") {
      if (value != "true" && value != "false") {
        throw UsageError("scenario field 'directed' must be true or false");
      }
      sc.directed = value == "true";
    } else if (key == "experiment") {
      sc.experiment = value;
      have_experiment = true;
    } else if (key == "kg") {
      sc.kg = detail::parse_double(value, key);
      have_kg = true;
    } else if (key == "kb") {
      sc.kb = detail::parse_double(value, key);
    } else if (key == "w0_sweep") {
      sc.w0_sweep = detail::parse_list(value, key);
    } else if (key == "z0_values") {
      sc.z0_values = detail::parse_list(value, key);
    } else if (key == "theta") {
      sc.theta = detail::parse_double(value, key);
    } else if (key == "seed") {
      try {
        sc.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw UsageError("scenario field 'seed': bad integer '" + value + "'");
      }
    } else {
      throw UsageError("unknown scenario key '" + key + "'");
    }
  }

  if (!have_dataset) throw UsageError("scenario is missing 'dataset'");
  if (!have_experiment) throw UsageError("scenario is missing 'experiment'");
  if (!have_kg) throw UsageError("scenario is missing 'kg'");
  const auto& tags = experiment_tags();
  if (std::find(tags.begin(), tags.end(), sc.experiment) == tags.end()) {
    std::string all;
    for (const auto& t : tags) all += (all.empty() ? "" : ", ") + t;
    throw UsageError("unknown experiment '" + sc.experiment + "'; one of: " + all);
  }
  if (!(sc.kg >= 0.0) || !(sc.kb >= 0.0)) {
    throw UsageError("budgets kg and kb must be non-negative");
  }
  if (!(sc.theta >= 0.0)) throw UsageError("theta must be non-negative");
  for (double w0 : sc.w0_sweep) {
    if (!(w0 >= 0.0 && w0 <= 1.0)) {
      throw UsageError("w0_sweep entries must lie in [0, 1]");
    }
  }
  for (double z0 : sc.z0_values) {
    if (!(z0 >= -1.0 && z0 <= 1.0)) {
      throw UsageError("z0_values entries must lie in [-1, 1]");
    }
  }
  if (sc.format == "weighted") {
    throw UsageError(
        "experiments sweep uniform node parameters and need format = "
        "edge-list; weighted datasets are supported by the validate command");
  }
  return sc;
}

namespace detail {

inline long long original_id(const Network& net, int node) {
  if (node < 0) return -1;
  return static_cast<long long>(net.original_ids[node]);
}

struct ExperimentContext {
  const Scenario& scenario;
  const EdgeList& edges;
  int threads;
};

inline Network network_for(const ExperimentContext& ctx, double w0,
                           double z0) {
  return build_network(ctx.edges, w0, ctx.scenario.theta, z0);
}

inline CsvTable run_budget_curve(const ExperimentContext& ctx) {
  double w0 = ctx.scenario.w0_sweep.front();
  Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
  CentralityBundle bundle = centralities(net);
  CampaignTerms terms = campaign_terms(bundle, net.camp_weight_total);
  double kg = ctx.scenario.kg;

  CsvTable table;
  table.columns = {"k1", "objective"};
  const int steps = 100;
  for (int i = 0; i <= steps; ++i) {
    double k1 = kg * i / steps;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < net.n; ++a) {
      for (int b = 0; b < net.n; ++b) {
        best = std::max(best, pair_value(terms, kg, a, b, k1));
      }
    }
    table.rows.push_back({k1, best});
  }
  return table;
}

inline CsvTable run_w0_sweep(const ExperimentContext& ctx) {
  CsvTable table;
  table.columns = {"w0", "k1_opt", "k2_opt", "objective", "alpha", "beta"};
  for (double w0 : ctx.scenario.w0_sweep) {
    Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
    CentralityBundle bundle = centralities(net);
    SingleCampSolution sol =
        solve_single_camp(net, bundle, ctx.scenario.kg, ctx.threads);
    table.rows.push_back({w0, sol.k1, sol.k2, sol.objective,
                          original_id(net, sol.alpha),
                          original_id(net, sol.beta)});
  }
  return table;
}

inline CsvTable run_myopic_compare(const ExperimentContext& ctx) {
  CsvTable table;
  table.columns = {"w0", "sum_z1_myopic", "sum_z1_far", "sum_z2_myopic",
                   "sum_z2_far"};
  for (double w0 : ctx.scenario.w0_sweep) {
    Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
    CentralityBundle bundle = centralities(net);
    Vector zero = Vector::Zero(net.n);

    Vector x1_myopic =
        myopic_strategy(net, bundle, ctx.scenario.kg, Camp::kGood);
    Vector z1_m =
        steady_state(net, bundle, {net.initial_bias, x1_myopic, zero});
    Vector z2_m = steady_state(net, bundle, {z1_m, zero, zero});

    SingleCampSolution sol =
        solve_single_camp(net, bundle, ctx.scenario.kg, ctx.threads);
    Vector x1_far = zero, x2_far = zero;
    if (sol.invests) {
      x1_far[sol.alpha] = sol.k1;
      x2_far[sol.beta] += sol.k2;
    }
    Vector z1_f = steady_state(net, bundle, {net.initial_bias, x1_far, zero});
    Vector z2_f = steady_state(net, bundle, {z1_f, x2_far, zero});

    table.rows.push_back({w0, z1_m.sum(), z1_f.sum(), z2_m.sum(), z2_f.sum()});
  }
  return table;
}

inline CsvTable run_heuristic_compare(const ExperimentContext& ctx) {
  CsvTable table;
  table.columns = {"w0", "strategy_name", "objective"};
  for (double w0 : ctx.scenario.w0_sweep) {
    Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
    CentralityBundle bundle = centralities(net);
    for (const NamedStrategy& st : heuristic_strategies(
             net, bundle, ctx.scenario.kg, ctx.scenario.seed)) {
      table.rows.push_back({w0, st.name, st.solution.objective});
    }
    SingleCampSolution sol =
        solve_single_camp(net, bundle, ctx.scenario.kg, ctx.threads);
    table.rows.push_back({w0, std::string("optimal"), sol.objective});
  }
  return table;
}

inline CsvTable run_pair_histogram(const ExperimentContext& ctx) {
  double w0 = ctx.scenario.w0_sweep.front();
  Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
  CentralityBundle bundle = centralities(net);
  CampaignTerms terms = campaign_terms(bundle, net.camp_weight_total);

  std::vector<double> values;
  values.reserve(static_cast<size_t>(net.n) * net.n);
  for (int a = 0; a < net.n; ++a) {
    for (int b = 0; b < net.n; ++b) {
      values.push_back(best_split(terms, ctx.scenario.kg, a, b).value);
    }
  }
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());

  CsvTable table;
  table.columns = {"bin_low", "bin_high", "count"};
  const int bins = 40;
  if (!(hi - lo > 0.0)) {
    table.rows.push_back({lo, hi, static_cast<long long>(values.size())});
    return table;
  }
  std::vector<long long> counts(bins, 0);
  for (double v : values) {
    int bin = static_cast<int>((v - lo) / (hi - lo) * bins);
    counts[std::clamp(bin, 0, bins - 1)] += 1;
  }
  for (int i = 0; i < bins; ++i) {
    double bin_lo = lo + (hi - lo) * i / bins;
    double bin_hi = lo + (hi - lo) * (i + 1) / bins;
    table.rows.push_back({bin_lo, bin_hi, counts[i]});
  }
  return table;
}

inline CsvTable run_phasewise_dump(const ExperimentContext& ctx, double w0) {
  Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
  CentralityBundle bundle = centralities(net);
  SingleCampSolution sol =
      solve_single_camp(net, bundle, ctx.scenario.kg, ctx.threads);
  Vector zero = Vector::Zero(net.n);
  Vector x1 = zero, x2 = zero;
  if (sol.invests) {
    x1[sol.alpha] = sol.k1;
    x2[sol.beta] += sol.k2;
  }
  Vector z1 = steady_state(net, bundle, {net.initial_bias, x1, zero});
  Vector z2 = steady_state(net, bundle, {z1, x2, zero});

  CsvTable table;
  table.columns = {"node", "z0", "z1", "z2"};
  for (int i = 0; i < net.n; ++i) {
    table.rows.push_back({original_id(net, i), net.initial_bias[i], z1[i],
                          z2[i]});
  }
  return table;
}

inline CsvTable run_equilibrium_sweep(const ExperimentContext& ctx) {
  CsvTable table;
  table.columns = {"w0", "z0", "game_value", "expected_kg1", "expected_kb1"};
  for (double w0 : ctx.scenario.w0_sweep) {
    for (double z0 : ctx.scenario.z0_values) {
      Network net = network_for(ctx, w0, z0);
      CentralityBundle bundle = centralities(net);
      GameTable game = utility_matrix(net, bundle, ctx.scenario.kg,
                                      ctx.scenario.kb, ctx.threads);
      EquilibriumResult eq = solve_equilibrium(game.value);
      expected_phase1_investments(eq, game);
      table.rows.push_back(
          {w0, z0, eq.value, eq.expected_kg1, eq.expected_kb1});
    }
  }
  return table;
}

inline CsvTable run_deviation(const ExperimentContext& ctx) {
  CsvTable table;
  table.columns = {"w0", "mode", "utility_eq", "utility_dev"};
  for (double w0 : ctx.scenario.w0_sweep) {
    Network net = network_for(ctx, w0, ctx.scenario.z0_values.front());
    CentralityBundle bundle = centralities(net);
    GameTable game = utility_matrix(net, bundle, ctx.scenario.kg,
                                    ctx.scenario.kb, ctx.threads);
    EquilibriumResult eq = solve_equilibrium(game.value);
    for (auto [mode, name] :
         {std::pair{DeviationMode::kMyopic, "MYOPIC"},
          std::pair{DeviationMode::kSingleCampFarsighted,
                    "SINGLE_CAMP_FARSIGHTED"}}) {
      DeviationOutcome dev = deviation_analysis(net, bundle, game, eq, mode);
      table.rows.push_back(
          {w0, std::string(name), dev.utility_eq, dev.utility_dev});
    }
  }
  return table;
}

}  // namespace detail

// Runs the scenario's experiment and writes its CSV(s) plus a manifest that
// records the dataset hash and every parameter needed to reproduce the run.
// Reruns with the same scenario produce byte-identical files.
inline RunOutput run_scenario(const Scenario& scenario,
                              const std::filesystem::path& out_dir,
                              int threads = 0) {
  std::filesystem::create_directories(out_dir);
  std::uint64_t dataset_hash = detail::fnv1a_hash_file(scenario.dataset);
  EdgeList edges = load_edge_list(scenario.dataset, scenario.directed);
  if (edges.n > 5000) {
    std::cerr << "warning: " << edges.n
              << " nodes; dense centralities need O(n^2) memory and the "
                 "full game matrix O(n^4)\n";
  }

  detail::ExperimentContext ctx{scenario, edges, threads};
  RunOutput out;
  auto write = [&](const CsvTable& table, const std::string& name) {
    std::filesystem::path p = out_dir / name;
    emit_csv(table, p);
    out.files.push_back(p);
  };

  const std::string& exp = scenario.experiment;
  if (exp == "BUDGET_CURVE") {
    write(detail::run_budget_curve(ctx), "budget_curve.csv");
  } else if (exp == "W0_SWEEP") {
    write(detail::run_w0_sweep(ctx), "w0_sweep.csv");
  } else if (exp == "MYOPIC_COMPARE") {
    write(detail::run_myopic_compare(ctx), "myopic_compare.csv");
  } else if (exp == "HEURISTIC_COMPARE") {
    write(detail::run_heuristic_compare(ctx), "heuristic_compare.csv");
  } else if (exp == "PAIR_HISTOGRAM") {
    write(detail::run_pair_histogram(ctx), "pair_histogram.csv");
  } else if (exp == "PHASEWISE_DUMP") {
    for (double w0 : scenario.w0_sweep) {
      write(detail::run_phasewise_dump(ctx, w0),
            "phasewise_dump_w0_" + format_double(w0) + ".csv");
    }
  } else if (exp == "EQUILIBRIUM_SWEEP") {
    write(detail::run_equilibrium_sweep(ctx), "equilibrium_sweep.csv");
  } else if (exp == "DEVIATION") {
    write(detail::run_deviation(ctx), "deviation.csv");
  } else {
    throw UsageError("unknown experiment '" + exp + "'");
  }

  std::filesystem::path manifest_path = out_dir / "manifest.txt";
  {
    std::ostringstream m;
    m << "library_version = " << kVersion << "\n";
    m << "dataset = " << scenario.dataset.string() << "\n";
    m << "dataset_hash = fnv1a64:" << detail::hex64(dataset_hash) << "\n";
    m << "format = " << scenario.format << "\n";
    m << "directed = " << (scenario.directed ? "true" : "false") << "\n";
    m << "nodes = " << edges.n << "\n";
    m << "arcs = " << edges.arcs.size() << "\n";
    m << "experiment = " << scenario.experiment << "\n";
    m << "kg = " << format_double(scenario.kg) << "\n";
    m << "kb = " << format_double(scenario.kb) << "\n";
    m << "theta = " << format_double(scenario.theta) << "\n";
    m << "w0_sweep = " << detail::join_doubles(scenario.w0_sweep) << "\n";
    m << "z0_values = " << detail::join_doubles(scenario.z0_values) << "\n";
    m << "seed = " << scenario.seed << "\n";
    m << "outputs =";
    for (const auto& f : out.files) m << " " << f.filename().string();
    m << "\n";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw DataError("cannot write manifest: " + manifest_path.string());
    mf << m.str();
    if (!mf) throw DataError("write failed: " + manifest_path.string());
  }
  out.files.push_back(manifest_path);
  return out;
}

}  // namespace opiniongame
