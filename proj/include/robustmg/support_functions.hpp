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

#include <cmath>
#include <numeric>

#include "robustmg/types.hpp"
#include "robustmg/uncertainty.hpp"

namespace robustmg {

/// Result of evaluating a support function: the optimal value, a
/// distribution in the ball attaining it, and (KL only) the dual variable of
/// the divergence constraint.
struct SupportResult {
    double value = 0.0;
    Vec minimizer;
    double dual_parameter = 0.0;
};

namespace detail {

// Relative width of the golden-section bracket at which the KL dual solve
// stops; the search runs over log(lambda) so small multipliers keep full
// precision.
inline constexpr double kKlBracketTol = 1e-13;

// min_{q in KL ball} q.V via the one-dimensional concave dual
//   max_{lam >= 0}  -lam log sum_j p0_j exp(-V_j/lam) - lam theta,
// with the primal recovered as q_j ~ p0_j exp(-V_j/lam*). Exponents are
// shifted by min V over the support to stay in [-span, 0].
inline SupportResult sigma_kl(const UncertaintySet& set, const Vec& v) {
    const Vec& p0 = set.nominal;
    const double theta = set.radius;
    const std::size_t n = p0.size();

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (p0[j] <= 0.0) continue;
        vmin = std::min(vmin, v[j]);
        vmax = std::max(vmax, v[j]);
    }
    const double width = vmax - vmin;

    // Constant V on the support: every member of the ball gives the same
    // expectation.
    if (width <= 1e-14 * std::max(1.0, std::abs(vmax)))
        return {dot(p0, v), p0, 0.0};

    // If the ball is wide enough to reach the face of minimizing states, the
    // optimum is attained there exactly and the dual variable is zero.
    double face_mass = 0.0;
    const double face_cut = vmin + 1e-13 * std::max(1.0, width);
    for (std::size_t j = 0; j < n; ++j)
        if (p0[j] > 0.0 && v[j] <= face_cut) face_mass += p0[j];
    if (theta >= -std::log(face_mass)) {
        Vec q(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (p0[j] > 0.0 && v[j] <= face_cut) q[j] = p0[j] / face_mass;
        return {dot(q, v), std::move(q), 0.0};
    }

    // q(lambda)_j ~ p0_j exp(-(v_j - vmin)/lambda); the dual derivative is
    // KL(q(lambda) || p0) - theta, and the KL term decreases monotonically in
    // lambda, so the stationary point is a clean bisection target.
    Vec q(n, 0.0);
    const auto primal_kl = [&](double log_lam) {
        const double lam = std::exp(log_lam);
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            q[j] = p0[j] > 0.0 ? p0[j] * std::exp(-(v[j] - vmin) / lam) : 0.0;
        for (double x : q) z += x;
        double kl = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (q[j] <= 0.0) continue;
            q[j] /= z;
            kl += q[j] * std::log(q[j] / p0[j]);
        }
        return kl;
    };

    double lo = std::log(1e-14 * width);
    double hi = std::log(width / theta + 1.0);
    while (primal_kl(hi) > theta) hi += 1.0;  // safeguard; theta > 0 here
    for (int it = 0; it < 120 && hi - lo > kKlBracketTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (primal_kl(mid) > theta ? lo : hi) = mid;
    }
    const double lam = std::exp(hi);
    primal_kl(hi);  // leaves q at the feasible end of the bracket

    // The recovered primal can overshoot the ball by rounding; pull it back
    // onto the boundary along the segment toward the nominal, which the
    // convexity of the divergence makes monotone.
    if (kl_divergence(q, p0) > theta) {
        double t_lo = 0.0, t_hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double t = 0.5 * (t_lo + t_hi);
            Vec mix(n);
            for (std::size_t j = 0; j < n; ++j)
                mix[j] = (1.0 - t) * q[j] + t * p0[j];
            (kl_divergence(mix, p0) <= theta ? t_hi : t_lo) = t;
        }
        for (std::size_t j = 0; j < n; ++j)
            q[j] = (1.0 - t_hi) * q[j] + t_hi * p0[j];
    }
    return {dot(q, v), std::move(q), lam};
}

// min_{||q - p0||_1 <= theta} q.V: move up to theta/2 mass onto the cheapest
// state, taken from the most expensive states first.
inline SupportResult sigma_l1(const UncertaintySet& set, const Vec& v) {
    const Vec& p0 = set.nominal;
    const std::size_t n = p0.size();

    std::size_t dst = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (v[j] < v[dst]) dst = j;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (v[a] != v[b]) return v[a] > v[b];
        return a < b;
    });

    Vec q = p0;
    double budget = std::min(set.radius / 2.0, 1.0 - p0[dst]);
    for (std::size_t src : order) {
        if (budget <= 0.0) break;
        if (src == dst || v[src] <= v[dst]) continue;
        const double moved = std::min(budget, q[src]);
        q[src] -= moved;
        q[dst] += moved;
        budget -= moved;
    }
    return {dot(q, v), std::move(q), 0.0};
}

}  // namespace detail

/// Support function sigma_P(V) = min_{q in ball} q.V together with a
/// minimizing distribution. Exact for the singleton and L1 kinds; the KL
/// kind is solved through its concave dual to a 1e-12 bracket.
inline SupportResult sigma(const UncertaintySet& set, const Vec& v) {
    if (v.size() != set.nominal.size())
        throw ModelError("support function: vector length mismatch");
    if (!all_finite(v)) throw ModelError("support function: non-finite vector");

    if (set.is_singleton()) return {dot(set.nominal, v), set.nominal, 0.0};
    switch (set.kind) {
    case DivergenceKind::kKL: return detail::sigma_kl(set, v);
    case DivergenceKind::kL1: return detail::sigma_l1(set, v);
    default: return {dot(set.nominal, v), set.nominal, 0.0};
    }
}

/// max_{q in ball} q.V, by minimizing -V over the same ball.
inline SupportResult sigma_max(const UncertaintySet& set, const Vec& v) {
    Vec neg(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) neg[j] = -v[j];
    SupportResult res = sigma(set, neg);
    res.value = -res.value;
    return res;
}

}  // namespace robustmg
