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

#include <Eigen/SparseLU>

#include <cmath>
#include <string>
#include <utility>

#include "opiniongame/errors.hpp"
#include "opiniongame/network.hpp"

namespace opiniongame {

// Inputs of one campaigning phase: the opinion profile the phase starts
// from and the two camps' per-node investments.
struct PhaseInputs {
  Vector prior_opinion;  // z from the previous phase (z0 for phase 1)
  Vector x;              // good camp, non-negative
  Vector y;              // bad camp, non-negative
};

struct CampWeights {
  Vector good;  // weight on the good camp's message
  Vector bad;   // weight on the bad camp's message
};

// Influence-path quantities reused across all budget optimizers. With
// W the interpersonal weight matrix:
//   delta = (I - W)^{-1}
//   r_i   = sum_j delta(j, i)           single-phase influence of node i
//   b(j,i)= r_j * w0_j * delta(j, i)    phase-1-to-phase-2 path weight
//   s_i   = sum_j b(j, i)               two-phase influence of node i
//   c_i   = w0_i * z0_i                 carried-over bias
struct CentralityBundle {
  Matrix delta;
  Vector r;
  Matrix b;
  Vector s;
  Vector c;
};

namespace detail {

inline void check_investment(const Vector& v, const char* what, int n) {
  if (v.size() != n) {
    throw UsageError(std::string(what) + " has wrong dimension");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0) {
      throw UsageError(std::string(what) +
                       " must be non-negative and finite (node " +
                       std::to_string(i) + ")");
    }
  }
}

inline void check_phase_inputs(const Network& net, const PhaseInputs& in) {
  if (in.prior_opinion.size() != net.n) {
    throw UsageError("prior opinion has wrong dimension");
  }
  check_investment(in.x, "good investment", net.n);
  check_investment(in.y, "bad investment", net.n);
}

}  // namespace detail

// Weights each node grants the two campaign messages, tilted toward the
// camp its carried-over opinion already leans to:
//   wg_i = theta_i * (1 + w0_i * z_i) / 2
//   wb_i = theta_i * (1 - w0_i * z_i) / 2
// The two always sum to theta_i. Values are used as-is; no clamping.
inline CampWeights camp_weights(const Network& net,
                                const Vector& prior_opinion) {
  if (prior_opinion.size() != net.n) {
    throw UsageError("prior opinion has wrong dimension");
  }
  CampWeights cw;
  cw.good.resize(net.n);
  cw.bad.resize(net.n);
  for (int i = 0; i < net.n; ++i) {
    double lean = net.self_weight[i] * prior_opinion[i];
    cw.good[i] = net.camp_weight_total[i] * (1.0 + lean) / 2.0;
    cw.bad[i] = net.camp_weight_total[i] * (1.0 - lean) / 2.0;
  }
  return cw;
}

// Factors I - W once and derives every centrality. Fails if I - W is
// numerically singular; the factorization is verified by checking the
// residual of (I - W) * delta against the identity.
inline CentralityBundle centralities(const Network& net) {
  const int n = net.n;
  if (n <= 0) throw UsageError("centralities: empty network");

  Eigen::SparseMatrix<double> system(n, n);
  {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(net.w.nonZeros() + n);
    for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, 1.0);
    for (int i = 0; i < n; ++i) {
      for (SparseMatrix::InnerIterator it(net.w, i); it; ++it) {
        triplets.emplace_back(i, static_cast<int>(it.col()), -it.value());
      }
    }
    system.setFromTriplets(triplets.begin(), triplets.end());
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(system);
  lu.factorize(system);
  if (lu.info() != Eigen::Success) {
    throw NumericError("I - W is singular; opinions have no steady state");
  }

  CentralityBundle bundle;
  bundle.delta = lu.solve(Matrix::Identity(n, n));
  if (lu.info() != Eigen::Success) {
    throw NumericError("solving (I - W) delta = I failed");
  }
  double residual =
      (system * bundle.delta - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-9)) {
    throw NumericError("(I - W) inverse residual too large: " +
                       std::to_string(residual));
  }

  bundle.r = bundle.delta.colwise().sum().transpose();
  bundle.b = net.self_weight.cwiseProduct(bundle.r).asDiagonal() * bundle.delta;
  bundle.s = bundle.b.colwise().sum().transpose();
  bundle.c = net.self_weight.cwiseProduct(net.initial_bias);
  return bundle;
}

// Steady state of one phase, in closed form:
//   z = delta * (w0 .* z_prev + wg .* x - wb .* y)
inline Vector steady_state(const Network& net, const CentralityBundle& bundle,
                           const PhaseInputs& inputs) {
  detail::check_phase_inputs(net, inputs);
  if (bundle.delta.rows() != net.n || bundle.delta.cols() != net.n) {
    throw UsageError("centrality bundle does not match the network");
  }
  CampWeights cw = camp_weights(net, inputs.prior_opinion);
  Vector forcing = net.self_weight.cwiseProduct(inputs.prior_opinion) +
                   cw.good.cwiseProduct(inputs.x) -
                   cw.bad.cwiseProduct(inputs.y);
  return bundle.delta * forcing;
}

// The same steady state reached by running the update rule
//   z <- W z + w0 .* z_prev + wg .* x - wb .* y
// until the max-norm step drops below tol. Kept as an independent route to
// the closed form; also surfaces non-convergence for row sums >= 1.
inline Vector iterate_to_convergence(const Network& net,
                                     const PhaseInputs& inputs,
                                     double tol = 1e-10,
                                     long long max_iter = 200000) {
  detail::check_phase_inputs(net, inputs);
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  CampWeights cw = camp_weights(net, inputs.prior_opinion);
  Vector forcing = net.self_weight.cwiseProduct(inputs.prior_opinion) +
                   cw.good.cwiseProduct(inputs.x) -
                   cw.bad.cwiseProduct(inputs.y);
  Vector z = Vector::Zero(net.n);
  Vector next(net.n);
  for (long long iter = 0; iter < max_iter; ++iter) {
    next.noalias() = net.w * z;
    next += forcing;
    double step = (next - z).cwiseAbs().maxCoeff();
    z.swap(next);
    if (step < tol) return z;
  }
  throw NumericError("opinion iteration did not converge within " +
                     std::to_string(max_iter) + " steps");
}

// Total phase-2 opinion sum(z2) under per-node investments, evaluated from
// the centrality bundle without simulating either phase:
//   sum(z2) = c's
//           + sum_j x2_j (theta_j/2)(u_j + r_j)
//           + sum_j y2_j (theta_j/2)(u_j - r_j)
//           + sum_i x1_i (theta_i/2)(1 + c_i)(s_i + t_i)
//           - sum_i y1_i (theta_i/2)(1 - c_i)(s_i + t_i)
// with u = b c and t = b' ((x2 + y2) .* theta / 2).
inline double two_phase_objective(const Network& net,
                                  const CentralityBundle& bundle,
                                  const Vector& x1, const Vector& y1,
                                  const Vector& x2, const Vector& y2) {
  const int n = net.n;
  detail::check_investment(x1, "phase-1 good investment", n);
  detail::check_investment(y1, "phase-1 bad investment", n);
  detail::check_investment(x2, "phase-2 good investment", n);
  detail::check_investment(y2, "phase-2 bad investment", n);

  const Vector& theta = net.camp_weight_total;
  Vector u = bundle.b * bundle.c;
  Vector phase2_weight = (x2 + y2).cwiseProduct(theta) / 2.0;
  Vector t = bundle.b.transpose() * phase2_weight;

  double total = bundle.c.dot(bundle.s);
  double good2 = 0.0, bad2 = 0.0, good1 = 0.0, bad1 = 0.0;
  for (int j = 0; j < n; ++j) {
    good2 += x2[j] * (theta[j] / 2.0) * (u[j] + bundle.r[j]);
    bad2 += y2[j] * (theta[j] / 2.0) * (u[j] - bundle.r[j]);
  }
  for (int i = 0; i < n; ++i) {
    double reach = bundle.s[i] + t[i];
    good1 += x1[i] * (theta[i] / 2.0) * (1.0 + bundle.c[i]) * reach;
    bad1 += y1[i] * (theta[i] / 2.0) * (1.0 - bundle.c[i]) * reach;
  }
  return total + good2 + bad2 + good1 - bad1;
}

}  // namespace opiniongame
