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

#include <array>
#include <functional>

#include "robustmg/robust_dp.hpp"
#include "robustmg/stage_games.hpp"

namespace robustmg {

inline constexpr double kNashTol = 1e-8;
inline constexpr long kNashMaxRounds = 100000;

/// Output of a Nash-iteration run. For the average-reward variant `biases`
/// are the anchored h_i and `gains` the per-agent constants extracted from
/// the final sweep; for the discounted variant `biases` hold the value
/// functions V_i and `gains` report (1-gamma) times their midpoints.
struct NashIterationResult {
    JointPolicy policy;
    Vec gains;
    Mat biases;
    long rounds = 0;
    double terminal_span = 0.0;
    Mat terminal_diffs;  // per agent: h_i - h_i^0 of the final sweep
    std::array<long, 3> oracle_histogram{};  // indexed by StageClass
    Vec span_trace;
    bool discounted = false;
    double gamma = 0.0;

    bool used_heuristic_oracle() const {
        return oracle_histogram[static_cast<int>(StageClass::kGeneralBimatrix)] > 0;
    }
};

/// Observer invoked after every round with the current policy snapshot and
/// per-agent spans; used by the experiment pipelines to trace training.
using RoundCallback =
    std::function<void(long round, const JointPolicy& policy, const Vec& spans)>;

namespace detail {

inline double span_of_diff(const Vec& a, const Vec& b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < a.size(); ++s) {
        const double d = a[s] - b[s];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi - lo;
}

inline NashIterationResult run_nash_iteration(const MarkovGame& game, bool discounted,
                                              double gamma, double tol, long max_rounds,
                                              const RoundCallback& callback) {
    if (!(tol > 0.0)) throw ModelError("tolerance must be positive");
    if (discounted && !(gamma >= 0.0 && gamma < 1.0))
        throw ModelError("gamma must lie in [0,1)");

    const int N = game.num_agents();
    const int S = game.num_states();
    const int J = game.num_joint_actions();

    Mat h(N, Vec(S, 0.0)), updated(N, Vec(S, 0.0));
    NashIterationResult result;
    result.discounted = discounted;
    result.gamma = gamma;
    result.policy.probs.resize(N);
    for (int i = 0; i < N; ++i)
        result.policy.probs[i].assign(S, Vec(game.num_actions(i), 0.0));
    std::vector<std::array<long, 3>> state_class_counts(S);

    const double stop = discounted ? tol * (1.0 - gamma) : tol;
    double criterion = 0.0;
    Vec spans(N, 0.0);

    for (long round = 1; round <= max_rounds; ++round) {
        const Mat snapshot = h;  // h_i^0: all agents read the previous round

        parallel_for(S, [&](std::size_t s) {
            StageGame stage;
            stage.actions = game.actions_per_agent();
            stage.payoffs.assign(N, Vec(J, 0.0));
            for (int i = 0; i < N; ++i)
                for (int a = 0; a < J; ++a) {
                    const double sup = sigma(game.uncertainty(static_cast<int>(s), a),
                                             snapshot[i]).value;
                    stage.payoffs[i][a] = game.reward(i, static_cast<int>(s), a) +
                                          (discounted ? gamma * sup : sup);
                }
            const StageEquilibrium eq = solve_stage(stage, StageMode::kAuto);
            ++state_class_counts[s][static_cast<int>(eq.cls)];
            for (int i = 0; i < N; ++i) {
                result.policy.probs[i][s] = eq.strategies[i];
                updated[i][s] = eq.values[i];
            }
        });

        // Termination measures the change of the raw sweep against the
        // round's snapshot: span for the average criterion, sup-norm for the
        // discounted one.
        criterion = 0.0;
        for (int i = 0; i < N; ++i) {
            spans[i] = discounted ? sup_diff(updated[i], snapshot[i])
                                  : span_of_diff(updated[i], snapshot[i]);
            criterion = std::max(criterion, spans[i]);
        }
        result.span_trace.push_back(criterion);
        result.rounds = round;

        const bool converged = criterion <= stop || (discounted && gamma == 0.0);

        if (converged || round == max_rounds) {
            result.terminal_span = criterion;
            result.terminal_diffs.assign(N, Vec(S, 0.0));
            result.gains.assign(N, 0.0);
            result.biases.assign(N, Vec(S, 0.0));
            for (int i = 0; i < N; ++i) {
                double dmin = std::numeric_limits<double>::infinity();
                double dmax = -std::numeric_limits<double>::infinity();
                for (int s = 0; s < S; ++s) {
                    const double d = updated[i][s] - snapshot[i][s];
                    result.terminal_diffs[i][s] = d;
                    dmin = std::min(dmin, d);
                    dmax = std::max(dmax, d);
                }
                if (discounted) {
                    double lo = *std::min_element(updated[i].begin(), updated[i].end());
                    double hi = *std::max_element(updated[i].begin(), updated[i].end());
                    result.gains[i] = (1.0 - gamma) * 0.5 * (lo + hi);
                    result.biases[i] = updated[i];
                } else {
                    result.gains[i] = 0.5 * (dmax + dmin);
                    const double anchor = updated[i][0];
                    for (int s = 0; s < S; ++s) result.biases[i][s] = updated[i][s] - anchor;
                }
            }
            for (const auto& counts : state_class_counts)
                for (int c = 0; c < 3; ++c) result.oracle_histogram[c] += counts[c];
            if (callback) callback(round, result.policy, spans);
            if (converged) return result;
            throw MaxIterExceeded("nash iteration did not converge", criterion,
                                  max_rounds, result.span_trace);
        }

        if (callback) callback(round, result.policy, spans);

        // Advance: the discounted values iterate raw; the average-reward
        // biases are re-anchored so they stay bounded while the subtracted
        // offset tracks the running gain.
        for (int i = 0; i < N; ++i) {
            if (discounted) {
                h[i] = updated[i];
            } else {
                const double anchor = updated[i][0];
                for (int s = 0; s < S; ++s) h[i][s] = updated[i][s] - anchor;
            }
        }
    }
    throw MaxIterExceeded("nash iteration did not converge", criterion, max_rounds,
                          result.span_trace);
}

}  // namespace detail

/// Average-reward Robust Nash-Iteration. Per round and state it solves the
/// stage game Q_i(s,a) = r_i(s,a) + sigma_{P^a_s}(h_i^0) with the
/// equilibrium oracle, sets h_i(s) to the equilibrium payoff, and stops once
/// max_i sp(h_i - h_i^0) <= tol.
inline NashIterationResult robust_nash_iteration_avg(const MarkovGame& game,
                                                     double tol = kNashTol,
                                                     long max_rounds = kNashMaxRounds,
                                                     const RoundCallback& callback = {}) {
    return detail::run_nash_iteration(game, /*discounted=*/false, 0.0, tol, max_rounds,
                                      callback);
}

/// Discounted counterpart: Q_i = r_i + gamma sigma(V_i^0) with sup-norm
/// stopping at tol * (1 - gamma).
inline NashIterationResult robust_nash_iteration_discounted(
    const MarkovGame& game, double gamma, double tol = kNashTol,
    long max_rounds = kNashMaxRounds, const RoundCallback& callback = {}) {
    return detail::run_nash_iteration(game, /*discounted=*/true, gamma, tol, max_rounds,
                                      callback);
}

/// Per-agent deviation gaps of a candidate product policy: best-response
/// gain minus the candidate's own gain on the induced robust MDP.
struct NeVerification {
    Vec gaps;  // per agent
    double epsilon = 0.0;
};

inline NeVerification verify_ne(const MarkovGame& game, const JointPolicy& candidate,
                                double tol = kDefaultTol) {
    candidate.validate(game);
    NeVerification out;
    out.gaps.resize(game.num_agents());
    for (int i = 0; i < game.num_agents(); ++i) {
        const RobustMdp induced = induce_mdp(game, i, candidate);
        const double own = robust_policy_eval(induced, candidate.probs[i], tol).gain;
        const double best = robust_optimal_control(induced, tol).first.gain;
        out.gaps[i] = best - own;
        out.epsilon = std::max(out.epsilon, out.gaps[i]);
    }
    return out;
}

/// Conservative upper bound on the robust diameter: per target state, the
/// worst-case expected hitting time of the best joint action is iterated to
/// a fixed point with the adversary maximizing (sigma_max), which bounds the
/// max-over-kernels min-over-policies diameter from above.
inline double robust_diameter_upper(const MarkovGame& game, double tol = 1e-9,
                                    long max_iter = 3000000) {
    // The iteration budget exceeds the 1e6 divergence guard on T because an
    // unreachable target grows T by at most one per sweep.
    if (!(tol > 0.0)) throw ModelError("tolerance must be positive");
    const int S = game.num_states();
    const int J = game.num_joint_actions();
    double diameter = 0.0;

    for (int target = 0; target < S; ++target) {
        Vec t(S, 0.0), next(S, 0.0);
        for (long it = 1; it <= max_iter; ++it) {
            for (int s = 0; s < S; ++s) {
                if (s == target) {
                    next[s] = 0.0;
                    continue;
                }
                double best = std::numeric_limits<double>::infinity();
                for (int a = 0; a < J; ++a)
                    best = std::min(best, sigma_max(game.uncertainty(s, a), t).value);
                next[s] = 1.0 + best;
                if (next[s] > 1e6)
                    throw DivergenceError(
                        "worst-case hitting time diverged; target state looks "
                        "unreachable");
            }
            const double change = sup_diff(next, t);
            t = next;
            if (change <= tol) break;
            if (it == max_iter)
                throw MaxIterExceeded("hitting-time iteration did not converge", change,
                                      max_iter);
        }
        for (int s = 0; s < S; ++s)
            if (s != target) diameter = std::max(diameter, t[s]);
    }
    return diameter;
}

/// gamma = 1 - epsilon / diameter, clamped into [0, 1).
inline double discount_for_epsilon(double diameter, double epsilon) {
    if (!(epsilon > 0.0)) throw ModelError("epsilon must be positive");
    if (!(diameter >= 1.0)) throw ModelError("diameter bound must be at least one");
    return std::max(0.0, 1.0 - epsilon / diameter);
}

}  // namespace robustmg
