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
#include <optional>

#include "robustmg/linprog.hpp"
#include "robustmg/types.hpp"

namespace robustmg {

/// One-shot matrix game over joint actions (one fixed state of the dynamic
/// game). Payoff tensors share the game's joint-action flattening: agent 0
/// is the most significant digit.
struct StageGame {
    IndexVec actions;           // per-agent action counts
    std::vector<Vec> payoffs;   // [agent][joint action]

    int num_agents() const { return static_cast<int>(actions.size()); }

    int joint_count() const {
        int j = 1;
        for (int a : actions) j *= a;
        return j;
    }

    int agent_action(int joint, int agent) const {
        for (int i = num_agents() - 1; i > agent; --i) joint /= actions[i];
        return joint % actions[agent];
    }

    void validate() const {
        if (actions.empty()) throw ModelError("stage game without agents");
        for (int a : actions)
            if (a < 1) throw ModelError("stage game with empty action set");
        if (static_cast<int>(payoffs.size()) != num_agents())
            throw ModelError("stage game payoff tensor count mismatch");
        for (const Vec& q : payoffs) {
            if (static_cast<int>(q.size()) != joint_count())
                throw ModelError("stage game payoff tensor shape mismatch");
            if (!all_finite(q)) throw ModelError("stage game payoff not finite");
        }
    }
};

enum class StageClass { kGlobalOptimal = 0, kSaddlePoint = 1, kGeneralBimatrix = 2 };
enum class StageMode { kAuto, kCommonPayoff, kZeroSum, kBimatrix };

inline std::string to_string(StageClass cls) {
    switch (cls) {
    case StageClass::kGlobalOptimal: return "global_optimal";
    case StageClass::kSaddlePoint: return "saddle_point";
    case StageClass::kGeneralBimatrix: return "general_bimatrix";
    }
    return "?";
}

struct StageEquilibrium {
    Mat strategies;  // [agent] -> mixed strategy over own actions
    Vec values;      // [agent] -> equilibrium payoff
    StageClass cls = StageClass::kGlobalOptimal;
    bool perturbed = false;
};

/// Expected payoff of `agent` under the product of mixed strategies.
inline double stage_expected_payoff(const StageGame& game, const Mat& strategies,
                                    int agent) {
    double total = 0.0;
    for (int joint = 0; joint < game.joint_count(); ++joint) {
        double w = 1.0;
        for (int i = 0; i < game.num_agents(); ++i)
            w *= strategies[i][game.agent_action(joint, i)];
        if (w != 0.0) total += w * game.payoffs[agent][joint];
    }
    return total;
}

/// Best payoff `agent` can get by a pure deviation while the others keep
/// their mixed strategies.
inline double stage_best_pure_response(const StageGame& game, const Mat& strategies,
                                       int agent) {
    Vec conditional(game.actions[agent], 0.0);
    for (int joint = 0; joint < game.joint_count(); ++joint) {
        double w = 1.0;
        for (int i = 0; i < game.num_agents(); ++i) {
            if (i == agent) continue;
            w *= strategies[i][game.agent_action(joint, i)];
        }
        if (w != 0.0) conditional[game.agent_action(joint, agent)] += w * game.payoffs[agent][joint];
    }
    return *std::max_element(conditional.begin(), conditional.end());
}

/// max over agents of (best pure deviation - equilibrium payoff); the
/// epsilon-equilibrium certificate.
inline double stage_deviation_gap(const StageGame& game, const Mat& strategies) {
    double gap = 0.0;
    for (int i = 0; i < game.num_agents(); ++i)
        gap = std::max(gap, stage_best_pure_response(game, strategies, i) -
                                stage_expected_payoff(game, strategies, i));
    return gap;
}

namespace detail {

inline constexpr double kClassTol = 1e-12;
inline constexpr double kSupportTol = 1e-9;

inline bool tensors_all_equal(const StageGame& game) {
    for (int i = 1; i < game.num_agents(); ++i)
        for (int j = 0; j < game.joint_count(); ++j)
            if (std::abs(game.payoffs[i][j] - game.payoffs[0][j]) > kClassTol)
                return false;
    return true;
}

// Zero-sum after centering: reward normalization shifts each agent's tensor
// affinely, so antisymmetry is recovered by subtracting per-tensor means.
inline bool tensors_centered_zero_sum(const StageGame& game) {
    if (game.num_agents() != 2) return false;
    const int J = game.joint_count();
    double m0 = 0.0, m1 = 0.0;
    for (int j = 0; j < J; ++j) {
        m0 += game.payoffs[0][j];
        m1 += game.payoffs[1][j];
    }
    m0 /= J;
    m1 /= J;
    for (int j = 0; j < J; ++j)
        if (std::abs((game.payoffs[0][j] - m0) + (game.payoffs[1][j] - m1)) > kClassTol)
            return false;
    return true;
}

inline StageEquilibrium solve_common_payoff(const StageGame& game) {
    int best = 0;
    for (int j = 1; j < game.joint_count(); ++j)
        if (game.payoffs[0][j] > game.payoffs[0][best]) best = j;
    StageEquilibrium eq;
    eq.cls = StageClass::kGlobalOptimal;
    eq.strategies.resize(game.num_agents());
    for (int i = 0; i < game.num_agents(); ++i) {
        eq.strategies[i].assign(game.actions[i], 0.0);
        eq.strategies[i][game.agent_action(best, i)] = 1.0;
    }
    eq.values.resize(game.num_agents());
    for (int i = 0; i < game.num_agents(); ++i) eq.values[i] = game.payoffs[i][best];
    return eq;
}

inline Mat payoff_matrix(const StageGame& game, int agent) {
    const int m = game.actions[0], n = game.actions[1];
    Mat a(m, Vec(n));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) a[r][c] = game.payoffs[agent][r * n + c];
    return a;
}

inline StageEquilibrium solve_zero_sum(const StageGame& game) {
    const Mat a = payoff_matrix(game, 0);
    auto [row_value, x] = matrix_game_row_value(a);

    // Column player's strategy from the mirrored game; the agreement of the
    // two LP values is the duality certificate.
    const int m = game.actions[0], n = game.actions[1];
    Mat neg_t(n, Vec(m));
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < m; ++r) neg_t[c][r] = -a[r][c];
    auto [col_value, y] = matrix_game_row_value(neg_t);
    if (std::abs(row_value + col_value) > 1e-10)
        throw NoEquilibriumFound("zero-sum duality gap above tolerance");

    StageEquilibrium eq;
    eq.cls = StageClass::kSaddlePoint;
    eq.strategies = {std::move(x), std::move(y)};
    eq.values.resize(2);
    for (int i = 0; i < 2; ++i) eq.values[i] = stage_expected_payoff(game, eq.strategies, i);
    return eq;
}

struct BimatrixCandidate {
    Mat strategies;
    Vec values;
    double welfare;
};

// Support enumeration: for every equal-size support pair solve the two
// indifference systems, then keep candidates that survive the feasibility
// and deviation checks.
inline std::optional<BimatrixCandidate> solve_bimatrix_supports(const StageGame& game) {
    const int m = game.actions[0], n = game.actions[1];
    const Mat a = payoff_matrix(game, 0);
    const Mat b = payoff_matrix(game, 1);

    std::optional<BimatrixCandidate> best;

    std::vector<IndexVec> row_supports, col_supports;
    for (int mask = 1; mask < (1 << m); ++mask) {
        IndexVec sup;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) sup.push_back(i);
        row_supports.push_back(std::move(sup));
    }
    for (int mask = 1; mask < (1 << n); ++mask) {
        IndexVec sup;
        for (int j = 0; j < n; ++j)
            if (mask & (1 << j)) sup.push_back(j);
        col_supports.push_back(std::move(sup));
    }
    // Lexicographic by (size, support sets) so welfare ties resolve
    // deterministically to the first candidate found.
    const auto order = [](const IndexVec& u, const IndexVec& v) {
        if (u.size() != v.size()) return u.size() < v.size();
        return u < v;
    };
    std::sort(row_supports.begin(), row_supports.end(), order);
    std::sort(col_supports.begin(), col_supports.end(), order);

    for (const IndexVec& s1 : row_supports) {
        for (const IndexVec& s2 : col_supports) {
            if (s1.size() != s2.size()) continue;
            const int k = static_cast<int>(s1.size());

            // Column strategy y makes the row player indifferent on s1.
            Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(k + 1, k + 1);
            Eigen::VectorXd r1 = Eigen::VectorXd::Zero(k + 1);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) m1(i, j) = a[s1[i]][s2[j]];
                m1(i, k) = -1.0;
            }
            for (int j = 0; j < k; ++j) m1(k, j) = 1.0;
            r1(k) = 1.0;

            // Row strategy x makes the column player indifferent on s2.
            Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(k + 1, k + 1);
            Eigen::VectorXd r2 = Eigen::VectorXd::Zero(k + 1);
            for (int j = 0; j < k; ++j) {
                for (int i = 0; i < k; ++i) m2(j, i) = b[s1[i]][s2[j]];
                m2(j, k) = -1.0;
            }
            for (int i = 0; i < k; ++i) m2(k, i) = 1.0;
            r2(k) = 1.0;

            Eigen::FullPivLU<Eigen::MatrixXd> lu1(m1), lu2(m2);
            if (!lu1.isInvertible() || !lu2.isInvertible()) continue;
            const Eigen::VectorXd z1 = lu1.solve(r1);
            const Eigen::VectorXd z2 = lu2.solve(r2);
            if ((m1 * z1 - r1).cwiseAbs().maxCoeff() > kSupportTol ||
                (m2 * z2 - r2).cwiseAbs().maxCoeff() > kSupportTol)
                continue;

            Vec x(m, 0.0), y(n, 0.0);
            bool feasible = true;
            for (int j = 0; j < k && feasible; ++j) {
                if (z1(j) < -kSupportTol) feasible = false;
                y[s2[j]] = std::max(0.0, z1(j));
            }
            for (int i = 0; i < k && feasible; ++i) {
                if (z2(i) < -kSupportTol) feasible = false;
                x[s1[i]] = std::max(0.0, z2(i));
            }
            if (!feasible) continue;
            const double v1 = z1(k), v2 = z2(k);

            // No action outside either support may beat the support value.
            for (int i = 0; i < m && feasible; ++i) {
                double payoff = 0.0;
                for (int j = 0; j < n; ++j) payoff += a[i][j] * y[j];
                if (payoff > v1 + kSupportTol) feasible = false;
            }
            for (int j = 0; j < n && feasible; ++j) {
                double payoff = 0.0;
                for (int i = 0; i < m; ++i) payoff += b[i][j] * x[i];
                if (payoff > v2 + kSupportTol) feasible = false;
            }
            if (!feasible) continue;

            BimatrixCandidate cand;
            cand.strategies = {std::move(x), std::move(y)};
            if (stage_deviation_gap(game, cand.strategies) > kSupportTol) continue;
            cand.values = {stage_expected_payoff(game, cand.strategies, 0),
                           stage_expected_payoff(game, cand.strategies, 1)};
            cand.welfare = cand.values[0] + cand.values[1];
            if (!best || cand.welfare > best->welfare + 1e-12) best = std::move(cand);
        }
    }
    return best;
}

inline StageEquilibrium solve_bimatrix(const StageGame& game) {
    if (game.actions[0] > 16 || game.actions[1] > 16)
        throw UnsupportedGameClass("bimatrix support enumeration limited to 16 actions");

    if (auto cand = solve_bimatrix_supports(game)) {
        return {std::move(cand->strategies), std::move(cand->values),
                StageClass::kGeneralBimatrix, false};
    }

    // Degenerate game: retry once with a tiny lexicographic perturbation,
    // reporting values from the original tensors.
    StageGame nudged = game;
    constexpr double kEta = 1e-9;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < game.joint_count(); ++j)
            nudged.payoffs[i][j] += kEta * (j + 1 + i * (game.joint_count() + 1));
    if (auto cand = solve_bimatrix_supports(nudged)) {
        StageEquilibrium eq;
        eq.cls = StageClass::kGeneralBimatrix;
        eq.perturbed = true;
        eq.strategies = std::move(cand->strategies);
        eq.values = {stage_expected_payoff(game, eq.strategies, 0),
                     stage_expected_payoff(game, eq.strategies, 1)};
        return eq;
    }
    throw NoEquilibriumFound("bimatrix support enumeration exhausted");
}

}  // namespace detail

/// Stage-game equilibrium oracle. kAuto picks the most specific class:
/// common payoff (deterministic joint argmax; certifies global optimality),
/// zero sum after per-tensor centering (exact LP saddle), otherwise the
/// two-player bimatrix path, which selects the welfare-maximizing
/// equilibrium from support enumeration. General-sum games with more than
/// two agents are unsupported.
inline StageEquilibrium solve_stage(const StageGame& game, StageMode mode = StageMode::kAuto) {
    game.validate();

    if (mode == StageMode::kAuto) {
        if (detail::tensors_all_equal(game)) mode = StageMode::kCommonPayoff;
        else if (game.num_agents() == 2 && detail::tensors_centered_zero_sum(game))
            mode = StageMode::kZeroSum;
        else if (game.num_agents() == 2) mode = StageMode::kBimatrix;
        else
            throw UnsupportedGameClass(
                "general-sum stage games need exactly two agents");
    }

    switch (mode) {
    case StageMode::kCommonPayoff:
        if (!detail::tensors_all_equal(game))
            throw UnsupportedGameClass("payoff tensors differ; not common payoff");
        return detail::solve_common_payoff(game);
    case StageMode::kZeroSum:
        if (game.num_agents() != 2 || !detail::tensors_centered_zero_sum(game))
            throw UnsupportedGameClass("not a centered zero-sum two-player game");
        return detail::solve_zero_sum(game);
    case StageMode::kBimatrix:
        if (game.num_agents() != 2)
            throw UnsupportedGameClass("bimatrix path needs exactly two agents");
        return detail::solve_bimatrix(game);
    default:
        throw UnsupportedGameClass("unknown stage mode");
    }
}

}  // namespace robustmg
