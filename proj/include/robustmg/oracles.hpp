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

#include <Eigen/Dense>
#include <random>

#include "robustmg/game_model.hpp"

// Brute-force reference implementations used by the test suites. Everything
// here works from first principles (linear solves, grids, sampling) and must
// never call the iterative solvers or the support-function duals it is used
// to check.
namespace robustmg::oracles {

/// Exact gain/bias of a fixed irreducible chain: stationary distribution
/// from a linear solve, gain mu.r, and the bias from the fundamental-matrix
/// system (I - P + 1 mu^T) h = r - g 1 anchored at the first state.
struct ExactChainSolution {
    Vec stationary;
    double gain = 0.0;
    Vec bias;
};

namespace detail {

inline void validate_kernel(const Mat& kernel) {
    const std::size_t n = kernel.size();
    if (n < 2) throw ModelError("kernel needs at least two states");
    for (const Vec& row : kernel)
        if (row.size() != n || !is_distribution(row, 1e-9))
            throw ModelError("kernel row is not a distribution");
}

inline bool kernel_irreducible(const Mat& kernel) {
    const int n = static_cast<int>(kernel.size());
    std::vector<std::vector<int>> adj(n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (kernel[s][t] > 0.0) adj[s].push_back(t);
    return robustmg::detail::strongly_connected(adj);
}

}  // namespace detail

inline ExactChainSolution exact_gain_bias(const Mat& kernel, const Vec& reward) {
    detail::validate_kernel(kernel);
    const int n = static_cast<int>(kernel.size());
    if (static_cast<int>(reward.size()) != n) throw ModelError("reward length mismatch");
    if (!detail::kernel_irreducible(kernel)) throw ModelError("reducible chain");

    // (P^T - I) mu = 0 with the last equation replaced by sum(mu) = 1.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = kernel[j][i] - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    const Eigen::VectorXd mu = a.fullPivLu().solve(rhs);

    ExactChainSolution out;
    out.stationary.assign(mu.data(), mu.data() + n);
    out.gain = 0.0;
    for (int s = 0; s < n; ++s) out.gain += out.stationary[s] * reward[s];

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b(i, j) = (i == j ? 1.0 : 0.0) - kernel[i][j] + mu(j);
    Eigen::VectorXd c(n);
    for (int s = 0; s < n; ++s) c(s) = reward[s] - out.gain;
    const Eigen::VectorXd h = b.fullPivLu().solve(c);
    out.bias.resize(n);
    for (int s = 0; s < n; ++s) out.bias[s] = h(s) - h(0);
    return out;
}

/// alpha(P) = 1 - (1/2) max_{i,j} sum_k |P(k|i) - P(k|j)|.
inline double ergodicity_coefficient(const Mat& kernel) {
    detail::validate_kernel(kernel);
    const int n = static_cast<int>(kernel.size());
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double tv = 0.0;
            for (int k = 0; k < n; ++k) tv += std::abs(kernel[i][k] - kernel[j][k]);
            worst = std::max(worst, tv);
        }
    return 1.0 - 0.5 * worst;
}

/// Feasible range of mass on state 0 for a two-state ball, located by
/// bisection on the membership predicate (the ball is convex, so the
/// feasible set is an interval around the nominal).
inline std::pair<double, double> feasible_interval(const UncertaintySet& set) {
    if (set.nominal.size() != 2) throw ModelError("feasible_interval needs two states");
    const auto feasible = [&](double t) {
        return divergence_of(set, Vec{t, 1.0 - t}) <= set.radius + 1e-15;
    };
    const double t0 = set.nominal[0];
    if (set.is_singleton()) return {t0, t0};

    double hi = t0;
    if (feasible(1.0)) {
        hi = 1.0;
    } else {
        double lo = t0, up = 1.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + up);
            (feasible(mid) ? lo : up) = mid;
        }
        hi = lo;
    }
    double lo = t0;
    if (feasible(0.0)) {
        lo = 0.0;
    } else {
        double dn = 0.0, up = t0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (dn + up);
            (feasible(mid) ? up : dn) = mid;
        }
        lo = up;
    }
    return {lo, hi};
}

/// Dense feasible members of a two- or three-state ball: a linspace over the
/// exact interval for two states, a filtered simplex lattice for three.
inline Mat feasible_rows(const UncertaintySet& set, int density) {
    const std::size_t n = set.nominal.size();
    Mat rows;
    if (n == 2) {
        const auto [lo, hi] = feasible_interval(set);
        const int k = std::max(2, density);
        for (int i = 0; i < k; ++i) {
            const double t = lo + (hi - lo) * i / (k - 1);
            rows.push_back({t, 1.0 - t});
        }
        return rows;
    }
    if (n == 3) {
        int m = 2;
        while ((m + 1) * (m + 2) / 2 < density) ++m;
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j + i <= m; ++j) {
                Vec q{static_cast<double>(i) / m, static_cast<double>(j) / m,
                      static_cast<double>(m - i - j) / m};
                if (divergence_of(set, q) <= set.radius + 1e-12) rows.push_back(std::move(q));
            }
        rows.push_back(set.nominal);
        return rows;
    }
    throw ModelError("feasible_rows supports two or three states");
}

/// Grid minimization of q.V over the ball. Two-state balls reduce to the
/// exact interval (the objective is linear in the single coordinate).
/// Three-state balls scan directions from the nominal on an angle grid,
/// bisecting each ray to the boundary of ball-intersect-simplex; the best
/// angle is then refined by golden section. Every boundary point is reached
/// by some ray because the feasible set is convex with the nominal in its
/// relative interior, and a linear objective attains its minimum there.
inline double grid_min_dot(const UncertaintySet& set, const Vec& v, int density = 200,
                           int refine_iters = 80) {
    const std::size_t n = set.nominal.size();
    if (set.is_singleton()) return dot(set.nominal, v);

    if (n == 2) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& q : feasible_rows(set, density)) best = std::min(best, dot(q, v));
        return best;
    }
    if (n != 3) throw ModelError("grid_min_dot supports two or three states");

    // KL balls are confined to the nominal's support; with a dead state the
    // problem is the two-state interval on the remaining coordinates.
    if (set.kind == DivergenceKind::kKL) {
        IndexVec support;
        for (int j = 0; j < 3; ++j)
            if (set.nominal[j] > 0.0) support.push_back(j);
        if (support.size() == 1) return v[support[0]];
        if (support.size() == 2) {
            UncertaintySet reduced{set.kind,
                                   {set.nominal[support[0]], set.nominal[support[1]]},
                                   set.radius};
            return grid_min_dot(reduced, {v[support[0]], v[support[1]]}, density);
        }
    }

    const Vec& p0 = set.nominal;
    const auto feasible = [&](const Vec& q) {
        for (double x : q)
            if (x < 0.0) return false;
        return divergence_of(set, q) <= set.radius;
    };
    // Value of the boundary point hit by the ray at angle phi in the
    // zero-sum displacement plane.
    const auto ray_value = [&](double phi) {
        const double ca = std::cos(phi), sa = std::sin(phi);
        const Vec delta{ca / std::sqrt(2.0) + sa / std::sqrt(6.0),
                        -ca / std::sqrt(2.0) + sa / std::sqrt(6.0),
                        -2.0 * sa / std::sqrt(6.0)};
        double lo = 0.0, hi = 2.0;
        for (int it = 0; it < 80; ++it) {
            const double t = 0.5 * (lo + hi);
            (feasible({p0[0] + t * delta[0], p0[1] + t * delta[1],
                       p0[2] + t * delta[2]})
                 ? lo
                 : hi) = t;
        }
        return dot(p0, v) + lo * dot(delta, v);
    };

    const int angles = std::max(density, 180);
    double best = dot(p0, v);
    double best_phi = 0.0;
    for (int k = 0; k < angles; ++k) {
        const double phi = 2.0 * M_PI * k / angles;
        const double val = ray_value(phi);
        if (val < best) {
            best = val;
            best_phi = phi;
        }
    }
    // Golden-section refinement of the angle around the incumbent.
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_phi - 2.0 * M_PI / angles;
    double hi = best_phi + 2.0 * M_PI / angles;
    double c = hi - golden * (hi - lo), d = lo + golden * (hi - lo);
    double fc = ray_value(c), fd = ray_value(d);
    for (int it = 0; it < refine_iters; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - golden * (hi - lo);
            fc = ray_value(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + golden * (hi - lo);
            fd = ray_value(d);
        }
    }
    return std::min(best, std::min(fc, fd));
}

namespace detail {

// Gain of a two-state chain in closed form; NaN marks a reducible chain.
inline double two_state_gain(const Mat& p, const Vec& r) {
    const double up = p[0][1], down = p[1][0];
    if (up <= 0.0 || down <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double total = up + down;
    return (down * r[0] + up * r[1]) / total;
}

inline double chain_gain(const Mat& p, const Vec& r) {
    if (p.size() == 2) return two_state_gain(p, r);
    if (!kernel_irreducible(p)) return std::numeric_limits<double>::quiet_NaN();
    return exact_gain_bias(p, r).gain;
}

}  // namespace detail

/// Brute-force robust gain: enumerates a dense product grid of feasible
/// kernels (per-pair candidates thinned evenly to keep the product within a
/// million combinations, endpoints preserved) and returns the minimal exact
/// gain of the policy-mixed chain. Two-state instances add shrinking-window
/// refinements around the incumbent product. Small instances only.
inline double worst_case_gain_grid(const MarkovGame& game, const JointPolicy& policy,
                                   int agent, int density = 200) {
    const int S = game.num_states();
    const int J = game.num_joint_actions();
    if (S > 3 || J > 4) throw ModelError("instance too large for the grid oracle");
    policy.validate(game);
    const Vec reward = marginal_reward(game, policy, agent);

    struct Pair {
        int s, a;
        double weight;
        double lo = 0.0, hi = 0.0;  // two-state interval parametrization
        Mat candidates;             // three-state lattice members
    };
    std::vector<Pair> pairs;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < J; ++a) {
            const double w = policy.joint_prob(game, s, a);
            if (w <= 0.0) continue;
            Pair p{s, a, w};
            if (S == 2) {
                std::tie(p.lo, p.hi) = feasible_interval(game.uncertainty(s, a));
            } else {
                p.candidates = feasible_rows(game.uncertainty(s, a), density);
            }
            pairs.push_back(std::move(p));
        }

    const int P = static_cast<int>(pairs.size());
    const int cap = std::max(2, static_cast<int>(std::pow(1e6, 1.0 / P)));

    // Current per-pair candidate lists (two-state ones regenerated per
    // refinement window).
    std::vector<Mat> grids(P);
    const auto fill_linspace = [&](int pi, double lo, double hi, int k) {
        grids[pi].clear();
        for (int i = 0; i < k; ++i) {
            const double t = k == 1 ? lo : lo + (hi - lo) * i / (k - 1);
            grids[pi].push_back({t, 1.0 - t});
        }
    };
    for (int pi = 0; pi < P; ++pi) {
        if (S == 2) {
            fill_linspace(pi, pairs[pi].lo, pairs[pi].hi, std::min(cap, density));
        } else {
            // Thin evenly, keeping the first and last lattice member.
            const Mat& all = pairs[pi].candidates;
            const int k = std::min<int>(cap, static_cast<int>(all.size()));
            for (int i = 0; i < k; ++i)
                grids[pi].push_back(all[(i * (all.size() - 1)) / std::max(1, k - 1)]);
        }
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<Vec> best_rows(P);
    const auto sweep = [&] {
        IndexVec choice(P, 0);
        Mat chain(S, Vec(S, 0.0));
        while (true) {
            for (auto& row : chain) std::fill(row.begin(), row.end(), 0.0);
            for (int pi = 0; pi < P; ++pi) {
                const Vec& q = grids[pi][choice[pi]];
                for (int t = 0; t < S; ++t) chain[pairs[pi].s][t] += pairs[pi].weight * q[t];
            }
            const double g = detail::chain_gain(chain, reward);
            if (!std::isnan(g) && g < best) {
                best = g;
                for (int pi = 0; pi < P; ++pi) best_rows[pi] = grids[pi][choice[pi]];
            }
            int pos = P - 1;
            while (pos >= 0 && ++choice[pos] == static_cast<int>(grids[pos].size()))
                choice[pos--] = 0;
            if (pos < 0) break;
        }
    };
    sweep();

    if (S == 2 && std::isfinite(best)) {
        double window = 0.0;
        for (int pi = 0; pi < P; ++pi)
            window = std::max(window, (pairs[pi].hi - pairs[pi].lo) /
                                          std::max(1, static_cast<int>(grids[pi].size()) - 1));
        const int refine_k = std::min(cap, 5);
        while (window > 1e-10) {
            for (int pi = 0; pi < P; ++pi) {
                const double center = best_rows[pi][0];
                const double lo = std::max(pairs[pi].lo, center - window);
                const double hi = std::min(pairs[pi].hi, center + window);
                fill_linspace(pi, lo, hi, refine_k);
            }
            sweep();
            window *= 0.5;
        }
    }
    return best;
}

/// One member of the ball, sampled by mixing the nominal toward a random
/// simplex direction and scaling the mix to stay feasible (the divergence is
/// convex and zero at the nominal, so it is monotone along the segment).
inline Vec sample_feasible_row(const UncertaintySet& set, std::mt19937_64& rng) {
    if (set.is_singleton()) return set.nominal;
    const std::size_t n = set.nominal.size();
    std::exponential_distribution<double> expo(1.0);
    Vec direction(n, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (set.kind == DivergenceKind::kKL && set.nominal[j] <= 0.0) continue;
        direction[j] = expo(rng);
        total += direction[j];
    }
    for (double& d : direction) d /= total;

    const auto mix = [&](double t) {
        Vec q(n);
        for (std::size_t j = 0; j < n; ++j)
            q[j] = (1.0 - t) * set.nominal[j] + t * direction[j];
        return q;
    };
    double lo = 0.0, hi = 1.0;
    if (divergence_of(set, mix(1.0)) <= set.radius) {
        lo = 1.0;
    } else {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (divergence_of(set, mix(mid)) <= set.radius ? lo : hi) = mid;
        }
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return mix(lo * unif(rng));
}

/// Exact gains of the policy-mixed chain under `samples` random feasible
/// kernels. Each one upper-bounds the robust gain.
inline Vec sampled_kernel_gains(const MarkovGame& game, const JointPolicy& policy,
                                int agent, int samples, std::uint64_t seed) {
    policy.validate(game);
    const int S = game.num_states();
    const int J = game.num_joint_actions();
    const Vec reward = marginal_reward(game, policy, agent);
    std::mt19937_64 rng(seed);

    Vec gains;
    gains.reserve(samples);
    while (static_cast<int>(gains.size()) < samples) {
        Mat chain(S, Vec(S, 0.0));
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < J; ++a) {
                const double w = policy.joint_prob(game, s, a);
                if (w <= 0.0) continue;
                const Vec q = sample_feasible_row(game.uncertainty(s, a), rng);
                for (int t = 0; t < S; ++t) chain[s][t] += w * q[t];
            }
        const double g = detail::chain_gain(chain, reward);
        if (!std::isnan(g)) gains.push_back(g);
    }
    return gains;
}

/// Worst-case gain of a deterministic policy by block-coordinate descent
/// over the per-state ball boundaries: the chain row of each state is
/// re-optimized along the boundary (interval endpoints for two states, a
/// golden-section scan over ray angles for three) with the other rows held
/// fixed, sweeping until no row improves. Restarts from the best sampled
/// kernels guard against coordinate-descent local minima. The per-row
/// optimum lies on the boundary because the gain is fractional-linear in a
/// single row.
inline double worst_case_gain_descent(const MarkovGame& game, const JointPolicy& policy,
                                      int agent, int samples = 200,
                                      std::uint64_t seed = 1, int restarts = 5) {
    const int S = game.num_states();
    policy.validate(game);

    // Deterministic choice per state.
    IndexVec choice(S, -1);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < game.num_joint_actions(); ++a)
            if (policy.joint_prob(game, s, a) == 1.0) choice[s] = a;
    for (int s = 0; s < S; ++s)
        if (choice[s] < 0) throw ModelError("descent oracle needs a deterministic policy");

    const Vec reward = marginal_reward(game, policy, agent);
    const auto gain_of = [&](const Mat& rows) { return detail::chain_gain(rows, reward); };

    // Sampled starting kernels, best first.
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, Mat>> starts;
    for (int k = 0; k < samples; ++k) {
        Mat rows(S);
        for (int s = 0; s < S; ++s)
            rows[s] = sample_feasible_row(game.uncertainty(s, choice[s]), rng);
        const double g = gain_of(rows);
        if (!std::isnan(g)) starts.push_back({g, std::move(rows)});
    }
    std::sort(starts.begin(), starts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (starts.empty()) throw ModelError("no irreducible sample found");

    double best_overall = starts.front().first;
    for (int r = 0; r < std::min<int>(restarts, starts.size()); ++r) {
        Mat rows = starts[r].second;
        double best = starts[r].first;
        for (int sweep = 0; sweep < 100; ++sweep) {
            const double before = best;
            for (int s = 0; s < S; ++s) {
                const UncertaintySet& ball = game.uncertainty(s, choice[s]);
                const auto try_row = [&](const Vec& q) {
                    const Vec saved = rows[s];
                    rows[s] = q;
                    const double g = gain_of(rows);
                    if (!std::isnan(g) && g < best - 1e-14) best = g;
                    else rows[s] = saved;
                };
                if (S == 2) {
                    const auto [lo, hi] = feasible_interval(ball);
                    try_row({lo, 1.0 - lo});
                    try_row({hi, 1.0 - hi});
                } else {
                    const Vec& p0 = ball.nominal;
                    const auto boundary_at = [&](double phi) {
                        const double ca = std::cos(phi), sa = std::sin(phi);
                        const Vec delta{ca / std::sqrt(2.0) + sa / std::sqrt(6.0),
                                        -ca / std::sqrt(2.0) + sa / std::sqrt(6.0),
                                        -2.0 * sa / std::sqrt(6.0)};
                        double lo = 0.0, hi = 2.0;
                        for (int it = 0; it < 70; ++it) {
                            const double t = 0.5 * (lo + hi);
                            Vec q{p0[0] + t * delta[0], p0[1] + t * delta[1],
                                  p0[2] + t * delta[2]};
                            const bool ok = q[0] >= 0.0 && q[1] >= 0.0 && q[2] >= 0.0 &&
                                            divergence_of(ball, q) <= ball.radius;
                            (ok ? lo : hi) = t;
                        }
                        return Vec{p0[0] + lo * delta[0], p0[1] + lo * delta[1],
                                   p0[2] + lo * delta[2]};
                    };
                    const auto angle_gain = [&](double phi) {
                        const Vec saved = rows[s];
                        rows[s] = boundary_at(phi);
                        const double g = gain_of(rows);
                        rows[s] = saved;
                        return std::isnan(g) ? std::numeric_limits<double>::infinity() : g;
                    };
                    const int coarse = 48;
                    double best_phi = 0.0, best_val = angle_gain(0.0);
                    for (int k = 1; k < coarse; ++k) {
                        const double phi = 2.0 * M_PI * k / coarse;
                        const double g = angle_gain(phi);
                        if (g < best_val) {
                            best_val = g;
                            best_phi = phi;
                        }
                    }
                    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
                    double lo = best_phi - 2.0 * M_PI / coarse;
                    double hi = best_phi + 2.0 * M_PI / coarse;
                    double c = hi - golden * (hi - lo), d = lo + golden * (hi - lo);
                    double fc = angle_gain(c), fd = angle_gain(d);
                    for (int it = 0; it < 50; ++it) {
                        if (fc < fd) {
                            hi = d;
                            d = c;
                            fd = fc;
                            c = hi - golden * (hi - lo);
                            fc = angle_gain(c);
                        } else {
                            lo = c;
                            c = d;
                            fc = fd;
                            d = lo + golden * (hi - lo);
                            fd = angle_gain(d);
                        }
                    }
                    try_row(boundary_at(0.5 * (lo + hi)));
                    if (fc < best || fd < best)
                        try_row(boundary_at(fc < fd ? c : d));
                }
            }
            if (before - best < 1e-13) break;
        }
        best_overall = std::min(best_overall, best);
    }
    return best_overall;
}

/// Expected hitting times of `target` under a fixed chain, from the linear
/// system T = 1 + P_{-target} T.
inline Vec expected_hitting_times(const Mat& kernel, int target) {
    detail::validate_kernel(kernel);
    const int n = static_cast<int>(kernel.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n - 1, n - 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n - 1);
    const auto reduced = [&](int s) { return s < target ? s : s - 1; };
    for (int s = 0; s < n; ++s) {
        if (s == target) continue;
        for (int t = 0; t < n; ++t) {
            if (t == target) continue;
            a(reduced(s), reduced(t)) =
                (s == t ? 1.0 : 0.0) - kernel[s][t];
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw ModelError("hitting-time system is singular");
    const Eigen::VectorXd x = lu.solve(rhs);
    Vec times(n, 0.0);
    for (int s = 0; s < n; ++s)
        if (s != target) times[s] = x(reduced(s));
    return times;
}

/// Exact diameter of a singleton-kernel game: enumerate deterministic joint
/// policies, solve each policy's hitting times exactly, minimize per state
/// pair and maximize over pairs.
inline double exact_diameter_enumeration(const MarkovGame& game) {
    const int S = game.num_states();
    const int J = game.num_joint_actions();
    double total = 1.0;
    for (int s = 0; s < S; ++s) total *= J;
    if (total > 2e6) throw ModelError("instance too large for diameter enumeration");

    Mat best(S, Vec(S, std::numeric_limits<double>::infinity()));
    IndexVec choice(S, 0);
    while (true) {
        Mat chain(S);
        for (int s = 0; s < S; ++s) chain[s] = game.uncertainty(s, choice[s]).nominal;
        for (int target = 0; target < S; ++target) {
            try {
                const Vec times = expected_hitting_times(chain, target);
                for (int s = 0; s < S; ++s)
                    if (s != target) best[s][target] = std::min(best[s][target], times[s]);
            } catch (const ModelError&) {
                // target unreachable under this policy; it contributes nothing
            }
        }
        int pos = S - 1;
        while (pos >= 0 && ++choice[pos] == J) choice[pos--] = 0;
        if (pos < 0) break;
    }
    double diameter = 0.0;
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < S; ++t)
            if (s != t) diameter = std::max(diameter, best[s][t]);
    return diameter;
}

}  // namespace robustmg::oracles
