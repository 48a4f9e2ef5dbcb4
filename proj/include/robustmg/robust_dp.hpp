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

#include <optional>
#include <utility>

#include "robustmg/game_model.hpp"
#include "robustmg/parallel.hpp"
#include "robustmg/types.hpp"

namespace robustmg {

/// Solution of the average-reward robust Bellman equation for one policy:
/// state-independent gain g, bias vector h anchored at h(s0) = 0 for the
/// first state, and the sup-norm Bellman residual at termination.
/// `worst_kernel` is the chain assembled from the per-(s,a) support-function
/// minimizers at the terminal bias, mixed by the evaluated policy.
struct GainBias {
    double gain = 0.0;
    Vec bias;
    double residual = 0.0;
    long iterations = 0;
    Mat worst_kernel;
    Vec span_trace;  // sp of the one-step change, per sweep
};

/// Fixed point of the discounted robust Bellman operator, accurate to the
/// requested tolerance via the (1-gamma)/gamma stopping rule.
struct DiscountedValue {
    double gamma = 0.0;
    Vec value;
    double residual = 0.0;
    long iterations = 0;
};

namespace detail {

// Damping weight of the aperiodicity transform applied to relative value
// iteration; fixed points are unchanged but periodic chains stop cycling.
inline constexpr double kRviDamping = 0.9;

inline void validate_policy_rows(const RobustMdp& mdp, const Mat& policy) {
    if (static_cast<int>(policy.size()) != mdp.num_states())
        throw ModelError("policy has wrong number of states");
    for (const Vec& row : policy)
        if (static_cast<int>(row.size()) != mdp.num_actions() || !is_distribution(row))
            throw ModelError("policy row is not a distribution");
}

// One sweep of the average-reward operator. Fills `updated` with T(h), and
// when `greedy` is given, records the lexicographic argmax per state. Row
// minimizers at h are accumulated into `kernel` mixed by the acting policy.
// Sweeps run serially: desk-scale states are far below the threading
// break-even, and callers parallelize at coarser layers.
inline void average_sweep(const RobustMdp& mdp, const Mat* policy, const Vec& h,
                          Vec& updated, IndexVec* greedy, Mat* kernel) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    for (int s = 0; s < S; ++s) {
        if (kernel) (*kernel)[s].assign(S, 0.0);
        if (kernel) (*kernel)[s].assign(S, 0.0);
        if (policy) {
            double total = 0.0;
            for (int a = 0; a < A; ++a) {
                const double w = (*policy)[s][a];
                if (w == 0.0) continue;
                const SupportResult sup = mdp.sigma(s, a, h);
                total += w * (mdp.reward(s, a) + sup.value);
                if (kernel)
                    for (int t = 0; t < S; ++t) (*kernel)[s][t] += w * sup.minimizer[t];
            }
            updated[s] = total;
        } else {
            double best = -std::numeric_limits<double>::infinity();
            int best_a = 0;
            Vec best_row;
            for (int a = 0; a < A; ++a) {
                const SupportResult sup = mdp.sigma(s, a, h);
                const double q = mdp.reward(s, a) + sup.value;
                if (q > best) {
                    best = q;
                    best_a = a;
                    if (kernel) best_row = sup.minimizer;
                }
            }
            updated[s] = best;
            if (greedy) (*greedy)[s] = best_a;
            if (kernel) (*kernel)[s] = std::move(best_row);
        }
    }
}

inline GainBias run_rvi(const RobustMdp& mdp, const Mat* policy, double tol,
                        long max_iter, IndexVec* greedy_out,
                        const Vec& initial_bias = {}) {
    if (!(tol > 0.0)) throw ModelError("tolerance must be positive");
    const int S = mdp.num_states();
    Vec h = initial_bias.empty() ? Vec(S, 0.0) : initial_bias;
    if (static_cast<int>(h.size()) != S) throw ModelError("initial bias length mismatch");
    Vec updated(S, 0.0);
    Mat kernel(S);
    IndexVec greedy(S, 0);
    Vec trace;

    double gain = 0.0, residual = 0.0;
    for (long it = 1; it <= max_iter; ++it) {
        average_sweep(mdp, policy, h, updated, &greedy, &kernel);

        // Midpoint of the one-step change certifies the gain with a
        // symmetric error bound of sp(d)/2.
        double dmin = std::numeric_limits<double>::infinity();
        double dmax = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < S; ++s) {
            const double d = updated[s] - h[s];
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        gain = 0.5 * (dmax + dmin);
        residual = 0.5 * (dmax - dmin);
        trace.push_back(dmax - dmin);

        if (residual <= tol) {
            GainBias out;
            out.gain = gain;
            const double anchor = h[0];
            out.bias.resize(S);
            for (int s = 0; s < S; ++s) out.bias[s] = h[s] - anchor;
            out.residual = residual;
            out.iterations = it;
            out.worst_kernel = std::move(kernel);
            out.span_trace = std::move(trace);
            if (greedy_out) *greedy_out = greedy;
            return out;
        }

        for (int s = 0; s < S; ++s)
            h[s] = (1.0 - kRviDamping) * h[s] + kRviDamping * updated[s];
        const double anchor = h[0];
        for (int s = 0; s < S; ++s) h[s] -= anchor;
    }
    throw MaxIterExceeded("relative value iteration did not converge", residual,
                          max_iter, trace);
}

}  // namespace detail

/// Robust policy evaluation: relative value iteration on
///   h(s) <- sum_a pi(a|s) (r(s,a) + sigma_{P^a_s}(h)) - offset,
/// returning (g, h) with Bellman residual at most tol.
inline GainBias robust_policy_eval(const RobustMdp& mdp, const Mat& policy,
                                   double tol = kDefaultTol,
                                   long max_iter = kDefaultMaxIter,
                                   const Vec& initial_bias = {}) {
    detail::validate_policy_rows(mdp, policy);
    return detail::run_rvi(mdp, &policy, tol, max_iter, nullptr, initial_bias);
}

/// Optimal robust control: the max-over-actions variant. Returns the solved
/// (g*, h*) and the greedy deterministic policy with lexicographic
/// tie-breaks on the action index.
inline std::pair<GainBias, IndexVec> robust_optimal_control(
    const RobustMdp& mdp, double tol = kDefaultTol, long max_iter = kDefaultMaxIter) {
    IndexVec greedy(mdp.num_states(), 0);
    GainBias gb = detail::run_rvi(mdp, nullptr, tol, max_iter, &greedy);
    return {std::move(gb), std::move(greedy)};
}

/// Best response of `agent` against the fixed opponent policy: optimal
/// robust control on the induced MDP. Returns the per-state one-hot policy
/// over the agent's own actions and its worst-case gain.
inline std::pair<Mat, double> best_response(const MarkovGame& game, int agent,
                                            const JointPolicy& others,
                                            double tol = kDefaultTol,
                                            long max_iter = kDefaultMaxIter) {
    const RobustMdp induced = induce_mdp(game, agent, others);
    auto [gb, greedy] = robust_optimal_control(induced, tol, max_iter);
    Mat policy(game.num_states(), Vec(game.num_actions(agent), 0.0));
    for (int s = 0; s < game.num_states(); ++s) policy[s][greedy[s]] = 1.0;
    return {std::move(policy), gb.gain};
}

namespace detail {

inline DiscountedValue run_discounted(const RobustMdp& mdp, const Mat* policy,
                                      double gamma, double tol, long max_iter,
                                      IndexVec* greedy_out) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ModelError("gamma must lie in [0,1)");
    if (!(tol > 0.0)) throw ModelError("tolerance must be positive");
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    Vec v(S, 0.0), updated(S, 0.0);
    IndexVec greedy(S, 0);
    const double stop = gamma == 0.0 ? std::numeric_limits<double>::infinity()
                                     : tol * (1.0 - gamma) / gamma;

    double residual = 0.0;
    for (long it = 1; it <= max_iter; ++it) {
        for (int s = 0; s < S; ++s) {
            if (policy) {
                double total = 0.0;
                for (int a = 0; a < A; ++a) {
                    const double w = (*policy)[s][a];
                    if (w == 0.0) continue;
                    total += w * (mdp.reward(s, a) + gamma * mdp.sigma(s, a, v).value);
                }
                updated[s] = total;
            } else {
                double best = -std::numeric_limits<double>::infinity();
                int best_a = 0;
                for (int a = 0; a < A; ++a) {
                    const double q =
                        mdp.reward(s, a) + gamma * mdp.sigma(s, a, v).value;
                    if (q > best) {
                        best = q;
                        best_a = a;
                    }
                }
                updated[s] = best;
                greedy[s] = best_a;
            }
        }
        residual = sup_diff(updated, v);
        v = updated;
        if (residual <= stop) {
            if (greedy_out) *greedy_out = greedy;
            return {gamma, std::move(v), residual, it};
        }
    }
    throw MaxIterExceeded("discounted iteration did not converge", residual, max_iter);
}

}  // namespace detail

/// Discounted robust policy evaluation by fixed-point iteration of
/// T_pi V = sum_a pi(a|.) (r + gamma sigma(V)).
inline DiscountedValue discounted_robust_eval(const RobustMdp& mdp, const Mat& policy,
                                              double gamma, double tol = kDefaultTol,
                                              long max_iter = kDefaultMaxIter) {
    detail::validate_policy_rows(mdp, policy);
    return detail::run_discounted(mdp, &policy, gamma, tol, max_iter, nullptr);
}

/// Discounted optimal robust control with lexicographic greedy tie-breaks.
inline std::pair<DiscountedValue, IndexVec> discounted_robust_optimal(
    const RobustMdp& mdp, double gamma, double tol = kDefaultTol,
    long max_iter = kDefaultMaxIter) {
    IndexVec greedy(mdp.num_states(), 0);
    DiscountedValue dv = detail::run_discounted(mdp, nullptr, gamma, tol, max_iter, &greedy);
    return {std::move(dv), std::move(greedy)};
}

}  // namespace robustmg
