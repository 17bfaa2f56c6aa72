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
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opiniongame/dynamics.hpp"
#include "opiniongame/network.hpp"
#include "opiniongame/parallel.hpp"
#include "opiniongame/simplex.hpp"
#include "opiniongame/single_camp.hpp"

namespace opiniongame {

// Node choices of both camps. A camp may stay out entirely (nullopt);
// otherwise it names (phase-1 node, phase-2 node).
struct PureProfile {
  std::optional<std::pair<int, int>> good;  // (alpha, beta)
  std::optional<std::pair<int, int>> bad;   // (gamma, delta)
};

struct SaddleSplit {
  double kg1 = 0.0;  // good camp's phase-1 share
  double kb1 = 0.0;  // bad camp's phase-1 share
  double value = 0.0;
};

// Payoffs and saddle splits of the full matrix game. Strategy 0 is staying
// out; strategy 1 + alpha * n + beta is the node pair (alpha, beta). value
// holds the good camp's utility at the within-profile saddle; good_phase1 /
// bad_phase1 hold the saddle budget splits.
struct GameTable {
  int n = 0;
  double kg = 0.0;
  double kb = 0.0;
  Matrix value;
  Matrix good_phase1;
  Matrix bad_phase1;
};

struct EquilibriumResult {
  Vector good_mix;
  Vector bad_mix;
  double value = 0.0;         // good camp's guaranteed sum(z2)
  double expected_kg1 = 0.0;  // filled by expected_phase1_investments
  double expected_kb1 = 0.0;
};

enum class DeviationMode { kMyopic, kSingleCampFarsighted };

struct DeviationOutcome {
  double utility_dev = 0.0;
  double utility_eq = 0.0;
};

inline int strategy_count(int n) { return n * n + 1; }

inline int strategy_index(int n, int first, int second) {
  return 1 + first * n + second;
}

inline std::optional<std::pair<int, int>> strategy_nodes(int n, int index) {
  if (index == 0) return std::nullopt;
  int flat = index - 1;
  return std::make_pair(flat / n, flat % n);
}

namespace detail {

/// Game-side per-node coefficients: the good camp's CampaignTerms plus the
// mirrored quantities for the bad camp.
struct GameTerms {
  CampaignTerms good;
  Vector H;   // (theta/2)(1 - c), bad camp's phase-1 responsiveness
  Vector Qb;  // (theta/2)(u - r), bad camp's standalone phase-2 payoff
};

inline GameTerms game_terms(const CentralityBundle& bundle,
                            const Vector& theta) {
  GameTerms t;
  t.good = campaign_terms(bundle, theta);
  const Eigen::Index n = theta.size();
  Vector u = bundle.b * bundle.c;
  t.H.resize(n);
  t.Qb.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.H[i] = t.good.half_theta[i] * (1.0 - bundle.c[i]);
    t.Qb[i] = t.good.half_theta[i] * (u[i] - bundle.r[i]);
  }
  return t;
}

// Good-camp utility when only the bad camp invests: h on gamma in phase 1
// and kb - h on delta in phase 2. Mirrors pair_value term by term.
inline double bad_pair_value(const GameTerms& t, double kb, int gamma,
                             int delta, double h) {
  double k2 = kb - h;
  double bilinear =
      -(t.H[gamma] * t.good.half_theta[delta] * (*t.good.b)(delta, gamma));
  return t.good.C0 + h * -(t.H[gamma] * (*t.good.s)[gamma]) + k2 * t.Qb[delta] +
         h * k2 * bilinear;
}

// Bad camp's best split of kb when it invests alone: the quadratic is convex
// in h, so the minimum is an endpoint or the clamped stationary point. Ties
// go to the smaller h, mirroring the good camp's rule.
inline PairSplit bad_best_split(const GameTerms& t, double kb, int gamma,
                                int delta) {
  double slope = -(t.H[gamma] * (*t.good.s)[gamma]) - t.Qb[delta];
  double quad =
      -(t.H[gamma] * t.good.half_theta[delta] * (*t.good.b)(delta, gamma));
  double candidates[3] = {0.0, kb, kb};
  int count = 2;
  if (quad != 0.0) {
    double stationary = kb / 2.0 + slope / (2.0 * quad);
    if (std::isfinite(stationary)) {
      candidates[count++] = std::clamp(stationary, 0.0, kb);
    }
  }
  std::sort(candidates, candidates + count);
  PairSplit best;
  best.k1 = candidates[0];
  best.value = bad_pair_value(t, kb, gamma, delta, candidates[0]);
  for (int i = 1; i < count; ++i) {
    double v = bad_pair_value(t, kb, gamma, delta, candidates[i]);
    if (v < best.value) {
      best.value = v;
      best.k1 = candidates[i];
    }
  }
  best.k2 = kb - best.k1;
  return best;
}

// The good-camp utility of one profile as a quadratic in the two phase-1
// shares g (good) and h (bad):
//   V(g, h) = v00 + vg g + vh h + vgg g^2 + vhh h^2 + vgh g h
// Under non-negative weights vgg <= 0 and vhh >= 0, so V is concave in g and
// convex in h and the within-profile zero-sum subgame has a saddle point.
struct ProfileQuadratic {
  double v00 = 0.0, vg = 0.0, vh = 0.0;
  double vgg = 0.0, vhh = 0.0, vgh = 0.0;
  double kg = 0.0, kb = 0.0;
  bool has_good = false, has_bad = false;

  double eval(double g, double h) const {
    return v00 + g * (vg + vgg * g) + h * (vh + vhh * h) + vgh * g * h;
  }
};

inline ProfileQuadratic profile_quadratic(const GameTerms& t,
                                          const PureProfile& profile,
                                          double kg, double kb) {
  ProfileQuadratic q;
  q.kg = profile.good ? kg : 0.0;
  q.kb = profile.bad ? kb : 0.0;
  q.has_good = profile.good.has_value();
  q.has_bad = profile.bad.has_value();
  q.v00 = t.good.C0;

  const Matrix& b = *t.good.b;
  const Vector& s = *t.good.s;
  auto tj = [&](int j, int i) { return t.good.half_theta[j] * b(j, i); };

  if (q.has_good) {
    auto [alpha, beta] = *profile.good;
    q.v00 += q.kg * t.good.P[beta];
    q.vg = -t.good.P[beta] + t.good.F[alpha] * (s[alpha] + q.kg * tj(beta, alpha));
    q.vgg = -(t.good.F[alpha] * tj(beta, alpha));
  }
  if (q.has_bad) {
    auto [gamma, delta] = *profile.bad;
    q.v00 += q.kb * t.Qb[delta];
    q.vh = -t.Qb[delta] - t.H[gamma] * (s[gamma] + q.kb * tj(delta, gamma));
    q.vhh = t.H[gamma] * tj(delta, gamma);
  }
  if (q.has_good && q.has_bad) {
    auto [alpha, beta] = *profile.good;
    auto [gamma, delta] = *profile.bad;
    q.vg += t.good.F[alpha] * q.kb * tj(delta, alpha);
    q.vh += -t.H[gamma] * q.kg * tj(beta, gamma);
    q.vgh = -(t.good.F[alpha] * tj(delta, alpha)) + t.H[gamma] * tj(beta, gamma);
  }
  return q;
}

// Largest good-camp value reachable by changing g alone (h fixed).
inline double best_unilateral_good(const ProfileQuadratic& q, double h) {
  double best = q.eval(0.0, h);
  best = std::max(best, q.eval(q.kg, h));
  if (q.vgg < 0.0) {
    double stat = (q.vg + q.vgh * h) / (-2.0 * q.vgg);
    if (std::isfinite(stat)) {
      best = std::max(best, q.eval(std::clamp(stat, 0.0, q.kg), h));
    }
  }
  return best;
}

// Smallest good-camp value the bad camp can force by changing h alone.
inline double best_unilateral_bad(const ProfileQuadratic& q, double g) {
  double best = q.eval(g, 0.0);
  best = std::min(best, q.eval(g, q.kb));
  if (q.vhh > 0.0) {
    double stat = -(q.vh + q.vgh * g) / (2.0 * q.vhh);
    if (std::isfinite(stat)) {
      best = std::min(best, q.eval(g, std::clamp(stat, 0.0, q.kb)));
    }
  }
  return best;
}

inline bool is_saddle(const ProfileQuadratic& q, double g, double h,
                      double tol) {
  double v = q.eval(g, h);
  return v >= best_unilateral_good(q, h) - tol &&
         v <= best_unilateral_bad(q, g) + tol;
}

// Solves the within-profile zero-sum subgame over ([0,kg] x [0,kb]) by
// enumerating the nine cases with each share at its lower bound, interior
// stationary point, or upper bound, and returning the first case that is a
// mutual best response. A damped best-response iteration is kept as a
// fallback for numerically marginal profiles.
inline SaddleSplit solve_profile_saddle(const ProfileQuadratic& q) {
  if (q.vgg > 0.0 || q.vhh < 0.0) {
    throw NumericError(
        "profile objective is not concave-convex; "
        "network violates the non-negative weight assumptions");
  }
  auto finish = [&](double g, double h) {
    SaddleSplit out;
    out.kg1 = g;
    out.kb1 = h;
    out.value = q.eval(g, h);
    return out;
  };
  if (!q.has_good && !q.has_bad) return finish(0.0, 0.0);

  double scale = 1.0 + std::abs(q.v00) + std::abs(q.vg) * q.kg +
                 std::abs(q.vh) * q.kb + std::abs(q.vgg) * q.kg * q.kg +
                 std::abs(q.vhh) * q.kb * q.kb +
                 std::abs(q.vgh) * q.kg * q.kb;
  double tol = 1e-11 * scale;
  double box_slack = 1e-9 * (1.0 + std::max(q.kg, q.kb));

  std::vector<std::pair<double, double>> candidates;
  auto add_if_boxed = [&](double g, double h) {
    if (!std::isfinite(g) || !std::isfinite(h)) return;
    if (g < -box_slack || g > q.kg + box_slack) return;
    if (h < -box_slack || h > q.kb + box_slack) return;
    candidates.emplace_back(std::clamp(g, 0.0, q.kg),
                            std::clamp(h, 0.0, q.kb));
  };

  double det = 4.0 * q.vgg * q.vhh - q.vgh * q.vgh;
  if (det != 0.0) {
    add_if_boxed((-q.vg * 2.0 * q.vhh + q.vh * q.vgh) / det,
                 (-q.vh * 2.0 * q.vgg + q.vg * q.vgh) / det);
  }
  for (double h0 : {0.0, q.kb}) {
    if (q.vgg < 0.0) {
      add_if_boxed((q.vg + q.vgh * h0) / (-2.0 * q.vgg), h0);
    }
  }
  for (double g0 : {0.0, q.kg}) {
    if (q.vhh > 0.0) {
      add_if_boxed(g0, -(q.vh + q.vgh * g0) / (2.0 * q.vhh));
    }
  }
  for (double g0 : {0.0, q.kg}) {
    for (double h0 : {0.0, q.kb}) {
      candidates.emplace_back(g0, h0);
    }
  }
  for (const auto& [g, h] : candidates) {
    if (is_saddle(q, g, h, tol)) return finish(g, h);
  }

  // Fallback: damped best responses. Converges for the concave-convex
  // quadratics this is called on; the result is re-verified before use.
  double g = q.kg / 2.0, h = q.kb / 2.0;
  for (int iter = 0; iter < 10000; ++iter) {
    double gn = g, hn = h;
    if (q.vgg < 0.0) {
      gn = std::clamp((q.vg + q.vgh * h) / (-2.0 * q.vgg), 0.0, q.kg);
    } else {
      double slope = q.vg + q.vgh * h;
      if (slope > 0.0) gn = q.kg;
      if (slope < 0.0) gn = 0.0;
    }
    if (q.vhh > 0.0) {
      hn = std::clamp(-(q.vh + q.vgh * g) / (2.0 * q.vhh), 0.0, q.kb);
    } else {
      double slope = q.vh + q.vgh * g;
      if (slope < 0.0) hn = q.kb;
      if (slope > 0.0) hn = 0.0;
    }
    double step = std::max(std::abs(gn - g), std::abs(hn - h));
    g += 0.5 * (gn - g);
    h += 0.5 * (hn - h);
    if (step < 1e-10) break;
  }
  if (is_saddle(q, g, h, 10.0 * tol)) return finish(g, h);
  throw NumericError("no saddle point found for profile");
}

inline void check_game_network(const Network& net) {
  for (int i = 0; i < net.n; ++i) {
    for (SparseMatrix::InnerIterator it(net.w, i); it; ++it) {
      if (!(it.value() >= 0.0)) {
        throw NumericError(
            "competitive solver needs non-negative interpersonal weights");
      }
    }
  }
  if (!validate(net).empty()) {
    throw NumericError("competitive solver needs a network passing validate()");
  }
}

}  // namespace detail

// Good-camp utility of a profile at explicit budget splits. Delegates to
// the single-camp closed forms when one side stays out, so those cases are
// bit-identical with the single-camp module.
inline double profile_value(const CentralityBundle& bundle,
                            const Vector& theta, double kg, double kb,
                            const PureProfile& profile, double kg1,
                            double kb1) {
  detail::check_budget(kg);
  detail::check_budget(kb);
  if (profile.good) {
    detail::check_node(profile.good->first, theta.size(), "good phase-1");
    detail::check_node(profile.good->second, theta.size(), "good phase-2");
    if (!(kg1 >= 0.0 && kg1 <= kg)) throw UsageError("kg1 must lie in [0, kg]");
  }
  if (profile.bad) {
    detail::check_node(profile.bad->first, theta.size(), "bad phase-1");
    detail::check_node(profile.bad->second, theta.size(), "bad phase-2");
    if (!(kb1 >= 0.0 && kb1 <= kb)) throw UsageError("kb1 must lie in [0, kb]");
  }
  detail::GameTerms terms = detail::game_terms(bundle, theta);
  if (profile.good && !profile.bad) {
    return detail::pair_value(terms.good, kg, profile.good->first,
                              profile.good->second, kg1);
  }
  if (!profile.good && profile.bad) {
    return detail::bad_pair_value(terms, kb, profile.bad->first,
                                  profile.bad->second, kb1);
  }
  if (!profile.good && !profile.bad) return terms.good.C0;
  return detail::profile_quadratic(terms, profile, kg, kb).eval(kg1, kb1);
}

// Saddle point of the within-profile budget subgame: the good camp picks
// kg1 to maximize, the bad camp picks kb1 to minimize, simultaneously.
inline SaddleSplit saddle_split(const CentralityBundle& bundle,
                                const Vector& theta, double kg, double kb,
                                int alpha, int beta, int gamma, int delta) {
  detail::check_budget(kg);
  detail::check_budget(kb);
  detail::check_node(alpha, theta.size(), "good phase-1");
  detail::check_node(beta, theta.size(), "good phase-2");
  detail::check_node(gamma, theta.size(), "bad phase-1");
  detail::check_node(delta, theta.size(), "bad phase-2");
  detail::GameTerms terms = detail::game_terms(bundle, theta);
  PureProfile profile{std::make_pair(alpha, beta), std::make_pair(gamma, delta)};
  return detail::solve_profile_saddle(
      detail::profile_quadratic(terms, profile, kg, kb));
}

// Payoff matrix of the full game over all (n^2 + 1) pure strategies per
// camp. Rows index the good camp, columns the bad camp. Cells where one
// side stays out reduce to the single-camp optimizer of the active camp;
// every other cell is the within-profile saddle. Cells are independent, so
// the computation is split across threads without affecting the result.
inline GameTable utility_matrix(const Network& net,
                                const CentralityBundle& bundle, double kg,
                                double kb, int threads = 0) {
  detail::check_budget(kg);
  detail::check_budget(kb);
  detail::check_game_network(net);

  const int n = net.n;
  const int count = strategy_count(n);
  detail::GameTerms terms = detail::game_terms(bundle, net.camp_weight_total);

  GameTable table;
  table.n = n;
  table.kg = kg;
  table.kb = kb;
  table.value.resize(count, count);
  table.good_phase1.resize(count, count);
  table.bad_phase1.resize(count, count);

  parallel_for(count, threads, [&](long long begin, long long end) {
    for (long long a = begin; a < end; ++a) {
      int row = static_cast<int>(a);
      auto good = strategy_nodes(n, row);
      for (int col = 0; col < count; ++col) {
        auto bad = strategy_nodes(n, col);
        double value, g1, b1;
        if (!good && !bad) {
          value = terms.good.C0;
          g1 = b1 = 0.0;
        } else if (good && !bad) {
          PairSplit split =
              detail::best_split(terms.good, kg, good->first, good->second);
          value = split.value;
          g1 = split.k1;
          b1 = 0.0;
        } else if (!good && bad) {
          PairSplit split =
              detail::bad_best_split(terms, kb, bad->first, bad->second);
          value = split.value;
          g1 = 0.0;
          b1 = split.k1;
        } else {
          SaddleSplit saddle = detail::solve_profile_saddle(
              detail::profile_quadratic(terms, {good, bad}, kg, kb));
          value = saddle.value;
          g1 = saddle.kg1;
          b1 = saddle.kb1;
        }
        table.value(row, col) = value;
        table.good_phase1(row, col) = g1;
        table.bad_phase1(row, col) = b1;
      }
    }
  });
  return table;
}

// Mixed Nash equilibrium of the zero-sum matrix game, via one linear
// program per camp. Entries are shifted to be >= 1 for conditioning (the
// shift cancels out of the reported value); the two LP values must agree,
// which cross-checks primal against dual.
inline EquilibriumResult solve_equilibrium(const Matrix& utilities) {
  const int rows = static_cast<int>(utilities.rows());
  const int cols = static_cast<int>(utilities.cols());
  if (rows <= 0 || cols <= 0) throw UsageError("empty utility matrix");
  if (!utilities.allFinite()) {
    throw NumericError("utility matrix has non-finite entries");
  }

  double lo = utilities.minCoeff();
  double hi = utilities.maxCoeff();
  EquilibriumResult eq;
  if (hi - lo <= 1e-14 * (1.0 + std::abs(hi))) {
    // Constant matrix (e.g. theta = 0): every strategy is equivalent.
    eq.good_mix = Vector::Constant(rows, 1.0 / rows);
    eq.bad_mix = Vector::Constant(cols, 1.0 / cols);
    eq.value = utilities(0, 0);
    return eq;
  }
  double shift = 1.0 - lo;  // all shifted entries >= 1

  // Good camp: min sum(p') s.t. shifted_U' p' >= 1, p' >= 0, scaled so the
  // game value is 1 / sum(p').
  std::vector<std::vector<double>> A(cols, std::vector<double>(rows));
  std::vector<double> b(cols, -1.0), c(rows, -1.0);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) A[j][i] = -(utilities(i, j) + shift);
  }
  LpResult good_lp = solve_lp_max(A, b, c);
  if (good_lp.status != LpStatus::kOptimal) {
    throw NumericError("good-camp equilibrium LP failed");
  }
  double good_total = 0.0;
  for (double v : good_lp.x) good_total += std::max(v, 0.0);
  if (!(good_total > 0.0)) throw NumericError("degenerate good-camp LP");
  double good_value = 1.0 / good_total - shift;

  // Bad camp: max sum(q') s.t. shifted_U q' <= 1, q' >= 0.
  std::vector<std::vector<double>> A2(rows, std::vector<double>(cols));
  std::vector<double> b2(rows, 1.0), c2(cols, 1.0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) A2[i][j] = utilities(i, j) + shift;
  }
  LpResult bad_lp = solve_lp_max(A2, b2, c2);
  if (bad_lp.status != LpStatus::kOptimal) {
    throw NumericError("bad-camp equilibrium LP failed");
  }
  double bad_total = 0.0;
  for (double v : bad_lp.x) bad_total += std::max(v, 0.0);
  if (!(bad_total > 0.0)) throw NumericError("degenerate bad-camp LP");
  double bad_value = 1.0 / bad_total - shift;

  if (std::abs(good_value - bad_value) > 1e-8 * (1.0 + std::abs(good_value))) {
    throw NumericError("equilibrium LPs disagree on the game value");
  }

  eq.good_mix.resize(rows);
  for (int i = 0; i < rows; ++i) {
    eq.good_mix[i] = std::max(good_lp.x[i], 0.0) / good_total;
  }
  eq.bad_mix.resize(cols);
  for (int j = 0; j < cols; ++j) {
    eq.bad_mix[j] = std::max(bad_lp.x[j], 0.0) / bad_total;
  }
  eq.value = good_value;
  return eq;
}

// Largest gain either camp can get by deviating to a pure strategy against
// the other's mixture. Both numbers are ~0 at an exact equilibrium.
inline std::pair<double, double> exploitability(const Matrix& utilities,
                                                const EquilibriumResult& eq) {
  Vector against_bad = utilities * eq.bad_mix;    // good deviations
  Vector against_good = utilities.transpose() * eq.good_mix;  // bad deviations
  double good_gain = against_bad.maxCoeff() - eq.value;
  double bad_gain = eq.value - against_good.minCoeff();
  return {good_gain, bad_gain};
}

// Expected phase-1 spending of both camps when the profile is drawn from
// the equilibrium mixtures and each profile plays its saddle split.
inline std::pair<double, double> expected_phase1_investments(
    EquilibriumResult& eq, const GameTable& table) {
  if (eq.good_mix.size() != table.value.rows() ||
      eq.bad_mix.size() != table.value.cols()) {
    throw UsageError("equilibrium does not match the game table");
  }
  eq.expected_kg1 = eq.good_mix.dot(table.good_phase1 * eq.bad_mix);
  eq.expected_kb1 = eq.good_mix.dot(table.bad_phase1 * eq.bad_mix);
  return {eq.expected_kg1, eq.expected_kb1};
}

// Expected utility when the good camp abandons equilibrium play for a fixed
// strategy while the bad camp keeps its equilibrium mixture (per-profile
// saddle splits included). The deviation forces the good camp's own split:
// myopic play puts the whole budget on the myopic node in phase 1;
// single-camp farsighted play uses the solve_single_camp plan. Both are
// bounded above by the equilibrium value.
inline DeviationOutcome deviation_analysis(const Network& net,
                                           const CentralityBundle& bundle,
                                           const GameTable& table,
                                           const EquilibriumResult& eq,
                                           DeviationMode mode) {
  const int n = table.n;
  detail::GameTerms terms = detail::game_terms(bundle, net.camp_weight_total);

  std::optional<std::pair<int, int>> nodes;
  double forced_kg1 = 0.0;
  if (mode == DeviationMode::kMyopic) {
    int m = myopic_node(net, bundle, Camp::kGood);
    Vector invest = myopic_strategy(net, bundle, table.kg, Camp::kGood);
    if (invest.maxCoeff() > 0.0) {
      nodes = std::make_pair(m, m);
      forced_kg1 = table.kg;
    }
  } else {
    SingleCampSolution sc = solve_single_camp(net, bundle, table.kg);
    if (sc.invests) {
      nodes = std::make_pair(sc.alpha, sc.beta);
      forced_kg1 = sc.k1;
    }
  }

  DeviationOutcome out;
  out.utility_eq = eq.value;
  double total = 0.0;
  if (!nodes) {
    // The deviation stays out; that is row 0 of the matrix.
    total = table.value.row(0).dot(eq.bad_mix);
  } else {
    int row = strategy_index(n, nodes->first, nodes->second);
    for (int col = 0; col < strategy_count(n); ++col) {
      double pb = eq.bad_mix[col];
      if (pb == 0.0) continue;
      auto bad = strategy_nodes(n, col);
      double v;
      if (!bad) {
        v = detail::pair_value(terms.good, table.kg, nodes->first,
                               nodes->second, forced_kg1);
      } else {
        PureProfile profile{nodes, bad};
        detail::ProfileQuadratic q =
            detail::profile_quadratic(terms, profile, table.kg, table.kb);
        v = q.eval(forced_kg1, table.bad_phase1(row, col));
      }
      total += pb * v;
    }
  }
  out.utility_dev = total;
  return out;
}

}  // namespace opiniongame
