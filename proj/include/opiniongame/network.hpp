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

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "opiniongame/errors.hpp"

namespace opiniongame {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A directed influence network with per-node opinion parameters.
//
// Row i of `w` lists the interpersonal weights node i places on the current
// opinions of its neighbors: w(i, j) != 0 means i listens to j. self_weight
// is the attachment to the node's own opinion from the previous phase,
// camp_weight_total is the total weight the node grants the two external
// campaigns, and initial_bias is the opinion each node starts phase 1 with.
struct Network {
  int n = 0;
  SparseMatrix w;
  Vector self_weight;        // w0, one entry per node
  Vector camp_weight_total;  // theta, one entry per node
  Vector initial_bias;       // z0, one entry per node
  // Dense index -> id used in the source file. Identity for generated nets.
  std::vector<std::int64_t> original_ids;
};

// Unweighted adjacency as read from an edge-list file, with ids already
// renumbered to 0..n-1 (sorted by original id).
struct EdgeList {
  int n = 0;
  std::vector<std::pair<int, int>> arcs;  // (listener, influencer)
  std::vector<std::int64_t> original_ids;
};

// One failed invariant, attributed to a node.
struct Violation {
  int node = 0;
  std::string message;
};

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
  for (char ch : line) {
    if (ch == '#' || ch == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;  // blank
}

inline DataError line_error(const std::filesystem::path& path, int line_no,
                            const std::string& what) {
  std::ostringstream os;
  os << path.string() << ":" << line_no << ": " << what;
  return DataError(os.str());
}

}  // namespace detail

// Reads a plain edge list: one "u v" pair of integer ids per line, lines
// beginning with '#' or '%' treated as comments. Ids need not be contiguous;
// they are renumbered densely in sorted order and the mapping is retained.
// With directed == false every pair is stored in both directions. Duplicate
// pairs collapse to one arc and self-loops are dropped. A file that yields
// no nodes is an error, as is any line that is not exactly two integers.
inline EdgeList load_edge_list(const std::filesystem::path& path,
                               bool directed = false) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list: " + path.string());

  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::set<std::int64_t> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::int64_t u = 0, v = 0;
    if (!(ls >> u >> v)) {
      throw detail::line_error(path, line_no, "expected two integer node ids");
    }
    std::string extra;
    if (ls >> extra) {
      throw detail::line_error(path, line_no,
                               "unexpected trailing token '" + extra + "'");
    }
    raw.emplace_back(u, v);
    ids.insert(u);
    ids.insert(v);
  }
  if (ids.empty()) throw DataError("empty graph: " + path.string());

  EdgeList out;
  out.original_ids.assign(ids.begin(), ids.end());
  out.n = static_cast<int>(out.original_ids.size());
  std::map<std::int64_t, int> dense;
  for (int i = 0; i < out.n; ++i) dense[out.original_ids[i]] = i;

  std::set<std::pair<int, int>> arcs;
  for (const auto& [u, v] : raw) {
    if (u == v) continue;
    int a = dense[u], b = dense[v];
    arcs.emplace(a, b);
    if (!directed) arcs.emplace(b, a);
  }
  out.arcs.assign(arcs.begin(), arcs.end());
  return out;
}

// Builds a network with uniform node parameters from an adjacency. Each node
// splits the interpersonal budget 1 - w0 - theta evenly over its neighbors,
// scaled by (1 - 1e-6) so every row sum stays strictly below 1 and the
// opinion recursion is guaranteed to converge.
inline Network build_network(const EdgeList& edges, double w0, double theta,
                             double z0) {
  if (!(w0 >= 0.0) || !(theta >= 0.0) || !(w0 + theta <= 1.0)) {
    throw UsageError("build_network needs w0 >= 0, theta >= 0, w0 + theta <= 1");
  }
  if (!(z0 >= -1.0 && z0 <= 1.0)) {
    throw UsageError("build_network needs z0 in [-1, 1]");
  }
  if (edges.n <= 0) throw UsageError("build_network: empty adjacency");

  constexpr double kRowSlack = 1e-6;
  Network net;
  net.n = edges.n;
  net.original_ids = edges.original_ids;
  if (net.original_ids.empty()) {
    net.original_ids.resize(net.n);
    for (int i = 0; i < net.n; ++i) net.original_ids[i] = i;
  }
  net.self_weight = Vector::Constant(net.n, w0);
  net.camp_weight_total = Vector::Constant(net.n, theta);
  net.initial_bias = Vector::Constant(net.n, z0);

  std::vector<int> degree(net.n, 0);
  for (const auto& [i, j] : edges.arcs) {
    if (i < 0 || i >= net.n || j < 0 || j >= net.n) {
      throw UsageError("build_network: arc index out of range");
    }
    ++degree[i];
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.arcs.size());
  double residual = (1.0 - w0 - theta) * (1.0 - kRowSlack);
  if (residual > 0.0) {
    for (const auto& [i, j] : edges.arcs) {
      triplets.emplace_back(i, j, residual / degree[i]);
    }
  }
  net.w.resize(net.n, net.n);
  net.w.setFromTriplets(triplets.begin(), triplets.end());
  return net;
}

/// Reads a fully specified weighted network. Format: a header line with the
// node count n, then arc lines "i j w" (0-based indices, any real weight)
// and node lines "i w0 theta z0". Line kinds are told apart by token count.
// Every node must get exactly one parameter line; arcs must be unique and
// off-diagonal. Numeric invariants are NOT enforced here; run validate() to
// check them, since deliberately out-of-range models are allowed to load.
inline Network load_weighted_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open network file: " + path.string());

  std::string line;
  int line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    if (!(ls >> n) || n <= 0) {
      throw detail::line_error(path, line_no, "expected positive node count");
    }
    std::string extra;
    if (ls >> extra) {
      throw detail::line_error(path, line_no, "header must be a bare count");
    }
    break;
  }
  if (n <= 0) throw DataError("missing node count header: " + path.string());

  Network net;
  net.n = n;
  net.self_weight = Vector::Zero(n);
  net.camp_weight_total = Vector::Zero(n);
  net.initial_bias = Vector::Zero(n);
  net.original_ids.resize(n);
  for (int i = 0; i < n; ++i) net.original_ids[i] = i;

  std::vector<Eigen::Triplet<double>> triplets;
  std::set<std::pair<int, int>> seen_arcs;
  std::vector<bool> seen_node(n, false);

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::vector<double> tok;
    double value = 0.0;
    while (ls >> value) tok.push_back(value);
    if (!ls.eof()) {
      throw detail::line_error(path, line_no, "non-numeric token");
    }
    auto node_index = [&](double raw) {
      int idx = static_cast<int>(raw);
      if (idx != raw || idx < 0 || idx >= n) {
        throw detail::line_error(path, line_no, "node index out of range");
      }
      return idx;
    };
    if (tok.size() == 3) {
      int i = node_index(tok[0]);
      int j = node_index(tok[1]);
      if (i == j) {
        throw detail::line_error(path, line_no, "self-loop not allowed");
      }
      if (!seen_arcs.emplace(i, j).second) {
        throw detail::line_error(path, line_no, "duplicate arc");
      }
      triplets.emplace_back(i, j, tok[2]);
    } else if (tok.size() == 4) {
      int i = node_index(tok[0]);
      if (seen_node[i]) {
        throw detail::line_error(path, line_no, "duplicate node parameters");
      }
      seen_node[i] = true;
      net.self_weight[i] = tok[1];
      net.camp_weight_total[i] = tok[2];
      net.initial_bias[i] = tok[3];
    } else {
      throw detail::line_error(
          path, line_no, "expected 'i j w' arc or 'i w0 theta z0' node line");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen_node[i]) {
      throw DataError(path.string() + ": missing parameters for node " +
                      std::to_string(i));
    }
  }
  net.w.resize(n, n);
  net.w.setFromTriplets(triplets.begin(), triplets.end());
  return net;
}

// Checks every model invariant and reports all failures instead of stopping
// at the first, so a dataset can be fixed in one pass.
inline std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  auto flag = [&out](int node, const std::string& msg) {
    out.push_back({node, msg});
  };
  if (net.n <= 0 || net.w.rows() != net.n || net.w.cols() != net.n ||
      net.self_weight.size() != net.n || net.camp_weight_total.size() != net.n ||
      net.initial_bias.size() != net.n) {
    flag(-1, "inconsistent dimensions");
    return out;
  }
  for (int i = 0; i < net.n; ++i) {
    double w0 = net.self_weight[i];
    double theta = net.camp_weight_total[i];
    double z0 = net.initial_bias[i];
    if (!std::isfinite(w0) || w0 < 0.0 || w0 > 1.0) {
      flag(i, "self weight outside [0, 1]");
    }
    if (!std::isfinite(theta) || theta < 0.0) {
      flag(i, "campaign weight negative");
    }
    if (!std::isfinite(z0) || z0 < -1.0 || z0 > 1.0) {
      flag(i, "initial bias outside [-1, 1]");
    }
    double abs_sum = 0.0;
    double signed_sum = 0.0;
    bool diag = false;
    bool bad_entry = false;
    for (SparseMatrix::InnerIterator it(net.w, i); it; ++it) {
      if (!std::isfinite(it.value())) bad_entry = true;
      abs_sum += std::abs(it.value());
      signed_sum += it.value();
      if (it.col() == i && it.value() != 0.0) diag = true;
    }
    if (bad_entry) flag(i, "non-finite interpersonal weight");
    if (!(abs_sum < 1.0)) {
      flag(i, "interpersonal weights must sum to < 1 in absolute value");
    }
    if (std::isfinite(abs_sum) && !bad_entry &&
        w0 + theta + signed_sum > 1.0 + 1e-12) {
      flag(i, "w0 + theta + interpersonal weights exceed 1");
    }
    if (diag) flag(i, "self-loop weight must be zero");
  }
  return out;
}

// Number of nodes a node listens to. For symmetric networks this is the
// ordinary degree.
inline std::vector<int> out_degrees(const Network& net) {
  std::vector<int> deg(net.n, 0);
  for (int i = 0; i < net.n; ++i) {
    for (SparseMatrix::InnerIterator it(net.w, i); it; ++it) {
      if (it.value() != 0.0) ++deg[i];
    }
  }
  return deg;
}

}  // namespace opiniongame
