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
#include <random>
#include <string>
#include <vector>

#include "opiniongame/dynamics.hpp"
#include "opiniongame/network.hpp"
#include "opiniongame/parallel.hpp"

namespace opiniongame {

// Best single-camp plan: invest k1 on node alpha in phase 1 and k2 on node
// beta in phase 2, or stay out entirely when no investment beats doing
// nothing. objective is the resulting sum of phase-2 opinions.
struct SingleCampSolution {
  bool invests = false;
  int alpha = -1;
  int beta = -1;
  double k1 = 0.0;
  double k2 = 0.0;
  double objective = 0.0;
};

struct PairSplit {
  double k1 = 0.0;
  double k2 = 0.0;
  double value = 0.0;
};

enum class Camp { kGood, kBad };

namespace detail {

// Per-node coefficients of the one-camp objective. For nodes (alpha, beta)
// and split (k1, kg - k1):
//   value = C0 + k1 * F[alpha] * s[alpha] + (kg - k1) * P[beta]
//         + k1 * (kg - k1) * F[alpha] * half_theta[beta] * b(beta, alpha)
struct CampaignTerms {
  double C0 = 0.0;
  Vector F;           // (theta/2)(1 + c), phase-1 responsiveness
  Vector P;           // (theta/2)(u + r), standalone phase-2 payoff
  Vector half_theta;  // theta/2
  const Matrix* b = nullptr;
  const Vector* s = nullptr;
};

inline CampaignTerms campaign_terms(const CentralityBundle& bundle,
                                    const Vector& theta) {
  const Eigen::Index n = theta.size();
  if (bundle.c.size() != n || bundle.r.size() != n || bundle.s.size() != n) {
    throw UsageError("centrality bundle does not match theta");
  }
  CampaignTerms t;
  t.C0 = bundle.c.dot(bundle.s);
  Vector u = bundle.b * bundle.c;
  t.F.resize(n);
  t.P.resize(n);
  t.half_theta = theta / 2.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    t.F[i] = t.half_theta[i] * (1.0 + bundle.c[i]);
    t.P[i] = t.half_theta[i] * (u[i] + bundle.r[i]);
  }
  t.b = &bundle.b;
  t.s = &bundle.s;
  return t;
}

inline double pair_value(const CampaignTerms& t, double kg, int alpha,
                         int beta, double k1) {
  double k2 = kg - k1;
  double bilinear = t.F[alpha] * t.half_theta[beta] * (*t.b)(beta, alpha);
  return t.C0 + k1 * t.F[alpha] * (*t.s)[alpha] + k2 * t.P[beta] +
         k1 * k2 * bilinear;
}

// Concave (or linear) quadratic in k1, so the best split is an endpoint or
// the clamped stationary point. Ties go to the smaller k1.
inline PairSplit best_split(const CampaignTerms& t, double kg, int alpha,
                            int beta) {
  double slope = t.F[alpha] * (*t.s)[alpha] - t.P[beta];
  double quad = t.F[alpha] * t.half_theta[beta] * (*t.b)(beta, alpha);
  double candidates[3] = {0.0, kg, kg};
  int count = 2;
  if (quad != 0.0) {
    double stationary = kg / 2.0 + slope / (2.0 * quad);
    if (std::isfinite(stationary)) {
      candidates[count++] = std::clamp(stationary, 0.0, kg);
    }
  }
  std::sort(candidates, candidates + count);
  PairSplit best;
  best.k1 = candidates[0];
  best.value = pair_value(t, kg, alpha, beta, candidates[0]);
  for (int i = 1; i < count; ++i) {
    double v = pair_value(t, kg, alpha, beta, candidates[i]);
    if (v > best.value) {
      best.value = v;
      best.k1 = candidates[i];
    }
  }
  best.k2 = kg - best.k1;
  return best;
}

inline void check_budget(double kg) {
  if (!std::isfinite(kg) || kg < 0.0) {
    throw UsageError("budget must be finite and non-negative");
  }
}

inline void check_node(int node, Eigen::Index n, const char* what) {
  if (node < 0 || node >= n) {
    throw UsageError(std::string(what) + " node index out of range");
  }
}

}  // namespace detail

// Objective for investing k1 on alpha in phase 1 and kg - k1 on beta in
// phase 2, with the opposing camp absent.
inline double pair_objective(const CentralityBundle& bundle,
                             const Vector& theta, double kg, int alpha,
                             int beta, double k1) {
  detail::check_budget(kg);
  detail::check_node(alpha, theta.size(), "phase-1");
  detail::check_node(beta, theta.size(), "phase-2");
  if (!(k1 >= 0.0 && k1 <= kg)) {
    throw UsageError("k1 must lie in [0, kg]");
  }
  return detail::pair_value(detail::campaign_terms(bundle, theta), kg, alpha,
                            beta, k1);
}

// Best split of kg across the two phases for a fixed node pair.
inline PairSplit optimal_split_for_pair(const CentralityBundle& bundle,
                                        const Vector& theta, double kg,
                                        int alpha, int beta) {
  detail::check_budget(kg);
  detail::check_node(alpha, theta.size(), "phase-1");
  detail::check_node(beta, theta.size(), "phase-2");
  return detail::best_split(detail::campaign_terms(bundle, theta), kg, alpha,
                            beta);
}

// Exhausts the budget on the best (alpha, beta) pair, or stays out if even
// the best pair does not beat the no-investment baseline. Scans all n^2
// pairs; ties resolve to the lexicographically smallest pair and then the
// smaller k1, independent of the thread count.
inline SingleCampSolution solve_single_camp(const Network& net,
                                            const CentralityBundle& bundle,
                                            double kg, int threads = 0) {
  detail::check_budget(kg);
  const int n = net.n;
  detail::CampaignTerms terms =
      detail::campaign_terms(bundle, net.camp_weight_total);

  struct Best {
    int alpha = -1;
    int beta = -1;
    PairSplit split;
    bool set = false;
  };
  std::vector<Best> partial(static_cast<size_t>(n));
  parallel_for(n, threads, [&](long long begin, long long end) {
    for (long long a = begin; a < end; ++a) {
      Best& best = partial[static_cast<size_t>(a)];
      for (int b = 0; b < n; ++b) {
        PairSplit split = detail::best_split(terms, kg, static_cast<int>(a), b);
        if (!best.set || split.value > best.split.value) {
          best = {static_cast<int>(a), b, split, true};
        }
      }
    }
  });

  Best overall;
  for (const Best& cand : partial) {
    if (cand.set && (!overall.set || cand.split.value > overall.split.value)) {
      overall = cand;
    }
  }

  SingleCampSolution out;
  out.objective = terms.C0;
  if (overall.set && overall.split.value > terms.C0) {
    out.invests = true;
    out.alpha = overall.alpha;
    out.beta = overall.beta;
    out.k1 = overall.split.k1;
    out.k2 = overall.split.k2;
    out.objective = overall.split.value;
  }
  return out;
}

// Node a phase-1-only (myopic) camp would pick: the one with the largest
// immediate effect on sum(z1), which is r_i * theta_i * (1 +/- c_i) / 2.
inline int myopic_node(const Network& net, const CentralityBundle& bundle,
                       Camp camp) {
  int best = 0;
  double best_coef = -1.0;
  for (int i = 0; i < net.n; ++i) {
    double lean = camp == Camp::kGood ? 1.0 + bundle.c[i] : 1.0 - bundle.c[i];
    double coef = bundle.r[i] * net.camp_weight_total[i] * lean / 2.0;
    if (coef > best_coef) {
      best_coef = coef;
      best = i;
    }
  }
  return best;
}

// Phase-1 investment vector of the myopic camp: the whole budget on the
// myopic node, or nothing when even that node's coefficient is not positive.
inline Vector myopic_strategy(const Network& net,
                              const CentralityBundle& bundle, double kg,
                              Camp camp) {
  detail::check_budget(kg);
  Vector invest = Vector::Zero(net.n);
  int node = myopic_node(net, bundle, camp);
  double lean =
      camp == Camp::kGood ? 1.0 + bundle.c[node] : 1.0 - bundle.c[node];
  double coef = bundle.r[node] * net.camp_weight_total[node] * lean / 2.0;
  if (coef > 0.0) invest[node] = kg;
  return invest;
}

struct NamedStrategy {
  std::string name;
  SingleCampSolution solution;
};

// Cheap strategies to compare against the optimizer: the highest-degree
// node with fixed or optimized splits, a greedy scan that fixes alpha by the
// phase-1 linear coefficient and then searches beta, and a seeded random
// pair as a baseline.
inline std::vector<NamedStrategy> heuristic_strategies(
    const Network& net, const CentralityBundle& bundle, double kg,
    unsigned long long seed = 42) {
  detail::check_budget(kg);
  const int n = net.n;
  detail::CampaignTerms terms =
      detail::campaign_terms(bundle, net.camp_weight_total);

  auto make = [&](const std::string& name, int alpha, int beta,
                  const PairSplit& split) {
    NamedStrategy st;
    st.name = name;
    st.solution.invests = true;
    st.solution.alpha = alpha;
    st.solution.beta = beta;
    st.solution.k1 = split.k1;
    st.solution.k2 = split.k2;
    st.solution.objective = split.value;
    return st;
  };
  auto fixed_split = [&](int alpha, int beta, double k1) {
    PairSplit split;
    split.k1 = k1;
    split.k2 = kg - k1;
    split.value = detail::pair_value(terms, kg, alpha, beta, k1);
    return split;
  };

  std::vector<int> degree = out_degrees(net);
  int hub = static_cast<int>(std::max_element(degree.begin(), degree.end()) -
                             degree.begin());

  int greedy_alpha = 0;
  double greedy_coef = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    double coef = terms.F[a] * (*terms.s)[a];
    if (coef > greedy_coef) {
      greedy_coef = coef;
      greedy_alpha = a;
    }
  }
  int greedy_beta = 0;
  PairSplit greedy_best;
  bool greedy_set = false;
  for (int b = 0; b < n; ++b) {
    PairSplit split = detail::best_split(terms, kg, greedy_alpha, b);
    if (!greedy_set || split.value > greedy_best.value) {
      greedy_best = split;
      greedy_beta = b;
      greedy_set = true;
    }
  }

  std::mt19937_64 rng(seed);
  int rand_alpha = static_cast<int>(rng() % static_cast<unsigned>(n));
  int rand_beta = static_cast<int>(rng() % static_cast<unsigned>(n));

  std::vector<NamedStrategy> out;
  out.push_back(
      make("high_degree_25_75", hub, hub, fixed_split(hub, hub, kg / 4.0)));
  out.push_back(
      make("high_degree_50_50", hub, hub, fixed_split(hub, hub, kg / 2.0)));
  out.push_back(make("high_degree_opt", hub, hub,
                     detail::best_split(terms, kg, hub, hub)));
  out.push_back(make("greedy", greedy_alpha, greedy_beta, greedy_best));
  out.push_back(make("random_pair", rand_alpha, rand_beta,
                     detail::best_split(terms, kg, rand_alpha, rand_beta)));
  return out;
}

}  // namespace opiniongame
