// Copyright 2026 The RobustMG Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <utility>

#include "robustmg/types.hpp"

namespace robustmg {

/// Dense two-phase simplex for small LPs:
///   maximize c.x  subject to  A x <= b, x >= 0.
/// Bland-style lexicographic pivot selection keeps the method deterministic
/// and cycle-free. Returns -inf when infeasible and +inf when unbounded.
class SimplexSolver {
  public:
    SimplexSolver(const Mat& a, const Vec& b, const Vec& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
          nonbasic_(n_ + 1), basic_(m_), tableau_(m_ + 2, Vec(n_ + 2)) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) tableau_[i][j] = a[i][j];
        for (int i = 0; i < m_; ++i) {
            basic_[i] = n_ + i;
            tableau_[i][n_] = -1.0;
            tableau_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            tableau_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;
        tableau_[m_ + 1][n_] = 1.0;
    }

    /// Solves the program; the optimal point is written to x.
    double solve(Vec& x) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (tableau_[i][n_ + 1] < tableau_[r][n_ + 1]) r = i;
        if (tableau_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!simplex(2) || tableau_[m_ + 1][n_ + 1] < -kEps)
                return -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i)
                if (basic_[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n_; ++j)
                        if (better_col(i, j, s)) s = j;
                    pivot(i, s);
                }
        }
        const bool bounded = simplex(1);
        x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basic_[i] < n_) x[basic_[i]] = tableau_[i][n_ + 1];
        return bounded ? tableau_[m_][n_ + 1]
                       : std::numeric_limits<double>::infinity();
    }

  private:
    static constexpr double kEps = 1e-12;

    bool better_col(int row, int j, int s) const {
        const auto key = [&](int col) {
            return std::pair<double, int>(tableau_[row][col], nonbasic_[col]);
        };
        return key(j) < key(s);
    }

    void pivot(int r, int s) {
        Vec& prow = tableau_[r];
        const double inv = 1.0 / prow[s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || std::abs(tableau_[i][s]) <= kEps) continue;
            Vec& row = tableau_[i];
            const double factor = row[s] * inv;
            for (int j = 0; j < n_ + 2; ++j) row[j] -= prow[j] * factor;
            row[s] = prow[s] * factor;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) prow[j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) tableau_[i][s] *= -inv;
        prow[s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    bool simplex(int phase) {
        const int obj = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (nonbasic_[j] == -phase) continue;
                if (s == -1 || better_col(obj, j, s)) s = j;
            }
            if (tableau_[obj][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (tableau_[i][s] <= kEps) continue;
                if (r == -1 ||
                    std::pair<double, int>(tableau_[i][n_ + 1] / tableau_[i][s],
                                           basic_[i]) <
                        std::pair<double, int>(tableau_[r][n_ + 1] / tableau_[r][s],
                                               basic_[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    int m_, n_;
    IndexVec nonbasic_, basic_;
    Mat tableau_;
};

/// Value and optimal mixed strategy of the row player in the matrix game
/// `payoff` (row player maximizes). Solved through the standard reduction
///   min 1.u  s.t.  A'^T u >= 1, u >= 0   with A' = payoff + shift > 0,
/// whose optimum recovers value = 1/(1.u) - shift and x = u / (1.u).
inline std::pair<double, Vec> matrix_game_row_value(const Mat& payoff) {
    const int m = static_cast<int>(payoff.size());
    const int n = static_cast<int>(payoff[0].size());
    double lo = payoff[0][0];
    for (const Vec& row : payoff)
        for (double v : row) lo = std::min(lo, v);
    const double shift = 1.0 - lo;

    // maximize -1.u s.t. -A'^T u <= -1, u >= 0
    Mat a(n, Vec(m));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) a[j][i] = -(payoff[i][j] + shift);
    Vec b(n, -1.0), c(m, -1.0), u;
    const double neg_total = SimplexSolver(a, b, c).solve(u);
    if (!std::isfinite(neg_total) || neg_total >= 0.0)
        throw NoEquilibriumFound("matrix game LP failed");
    const double total = -neg_total;
    Vec x(m);
    for (int i = 0; i < m; ++i) x[i] = u[i] / total;
    return {1.0 / total - shift, std::move(x)};
}

}  // namespace robustmg
