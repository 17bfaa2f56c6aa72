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

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace opiniongame {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex for
//   maximize c'x  subject to  A x <= b, x >= 0.
// Classic tableau method with lexicographic (value, index) pivot selection,
// which breaks ties deterministically and avoids cycling in practice. Fine
// for a few thousand rows/columns; everything here is O(m n) per pivot.
class DenseSimplex {
 public:
  DenseSimplex(const std::vector<std::vector<double>>& A,
               const std::vector<double>& b, const std::vector<double>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(n_ + 1),
        basic_(m_),
        tab_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) tab_[i][j] = A[i][j];
      basic_[i] = n_ + i;
      tab_[i][n_] = -1.0;
      tab_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      tab_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;  // artificial variable used by phase 1
    tab_[m_ + 1][n_] = 1.0;
  }

  LpResult solve() {
    LpResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (tab_[i][n_ + 1] < tab_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && tab_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!optimize(2) || tab_[m_ + 1][n_ + 1] < -kEps) {
        res.status = LpStatus::kInfeasible;
        return res;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j) {
          if (better(tab_[i], j, s)) s = j;
        }
        pivot(i, s);
      }
    }
    bool bounded = optimize(1);
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) res.x[basic_[i]] = tab_[i][n_ + 1];
    }
    if (!bounded) {
      res.status = LpStatus::kUnbounded;
      return res;
    }
    res.status = LpStatus::kOptimal;
    res.objective = tab_[m_][n_ + 1];
    return res;
  }

 private:
  static constexpr double kEps = 1e-9;

  bool better(const std::vector<double>& row, int j, int s) const {
    return std::pair(row[j], nonbasic_[j]) < std::pair(row[s], nonbasic_[s]);
  }

  void pivot(int r, int s) {
    std::vector<double>& pivot_row = tab_[r];
    double inv = 1.0 / pivot_row[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(tab_[i][s]) <= kEps) continue;
      std::vector<double>& row = tab_[i];
      double factor = row[s] * inv;
      for (int j = 0; j < n_ + 2; ++j) row[j] -= pivot_row[j] * factor;
      row[s] = pivot_row[s] * factor;
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) pivot_row[j] *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) tab_[i][s] *= -inv;
    }
    pivot_row[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool optimize(int phase) {
    int obj_row = m_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (s == -1 || better(tab_[obj_row], j, s)) s = j;
      }
      if (tab_[obj_row][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][s] <= kEps) continue;
        if (r == -1 ||
            std::pair(tab_[i][n_ + 1] / tab_[i][s], basic_[i]) <
                std::pair(tab_[r][n_ + 1] / tab_[r][s], basic_[r])) {
          r = i;
        }
      }
      if (r == -1) return false;  // objective unbounded along column s
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> nonbasic_;
  std::vector<int> basic_;
  std::vector<std::vector<double>> tab_;
};

inline LpResult solve_lp_max(const std::vector<std::vector<double>>& A,
                             const std::vector<double>& b,
                             const std::vector<double>& c) {
  return DenseSimplex(A, b, c).solve();
}

}  // namespace opiniongame
