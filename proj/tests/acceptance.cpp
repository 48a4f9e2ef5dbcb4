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

// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line with the measured worst value against its pinned tolerance; the
// process exits non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include "robustmg/oracles.hpp"
#include "robustmg/robustmg.hpp"
#include "test_helpers.hpp"

using namespace robustmg;
namespace testing = robustmg::testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& message) {
    if (!cond) throw Failure(message);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

RobustMdp random_single_agent(std::mt19937_64& rng, int states, int actions,
                              DivergenceKind kind, double theta) {
    Mat rewards(states);
    std::vector<std::vector<UncertaintySet>> sets(states);
    for (int s = 0; s < states; ++s) {
        rewards[s] = testing::random_vector(rng, actions, 0.0, 1.0);
        for (int a = 0; a < actions; ++a)
            sets[s].push_back(testing::random_ball(rng, states, kind, theta));
    }
    return RobustMdp::single_agent(std::move(rewards), std::move(sets));
}

// ---- criterion 1: solvability witness ------------------------------------

Outcome criterion_solvability() {
    std::mt19937_64 rng(1001);
    const double thetas[] = {0.0, 0.01, 0.1};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int S = 2 + trial % 4;
        const int A = 1 + trial % 3;
        const RobustMdp mdp =
            random_single_agent(rng, S, A, DivergenceKind::kKL, thetas[trial % 3]);
        const Mat policy = testing::random_policy_rows(rng, S, A);
        const GainBias gb = robust_policy_eval(mdp, policy, 1e-9);

        for (int s = 0; s < S; ++s) {
            double rhs = 0.0;
            for (int a = 0; a < A; ++a) {
                if (policy[s][a] == 0.0) continue;
                rhs += policy[s][a] * (mdp.reward(s, a) + mdp.sigma(s, a, gb.bias).value);
            }
            worst = std::max(worst, std::abs(gb.bias[s] + gb.gain - rhs));
        }
    }
    require(worst <= 1e-8, "residual " + fmt(worst) + " > 1e-8");
    return {true, "max residual " + fmt(worst) + " on 50 MDPs"};
}

// ---- criterion 2: robust gain vs grid + sampled kernels -------------------

Outcome criterion_gain_correctness() {
    std::mt19937_64 rng(1002);
    double worst_gap = 0.0, worst_violation = -1.0;
    for (int trial = 0; trial < 10; ++trial) {
        const bool use_l1 = trial % 2 == 1;
        const double theta = use_l1 ? 0.15 : 0.05;
        const MarkovGame game =
            testing::random_game(rng, 1, 2, {2}, theta, use_l1 ? "l1" : "kl");
        const JointPolicy policy = testing::random_joint_policy(rng, game);

        const double robust =
            robust_policy_eval(single_agent_view(game), policy.probs[0], 1e-10).gain;
        const double grid = oracles::worst_case_gain_grid(game, policy, 0, 200);
        worst_gap = std::max(worst_gap, std::abs(robust - grid));

        const Vec samples =
            oracles::sampled_kernel_gains(game, policy, 0, 100, 5000 + trial);
        for (double g : samples) worst_violation = std::max(worst_violation, robust - g);
    }
    require(worst_gap <= 1e-3, "grid gap " + fmt(worst_gap) + " > 1e-3");
    require(worst_violation <= 1e-9,
            "robust gain exceeded a sampled kernel by " + fmt(worst_violation));
    return {true, "grid gap " + fmt(worst_gap) + ", sample slack " +
                      fmt(-worst_violation)};
}

// ---- criterion 3: optimal control vs deterministic enumeration ------------

Outcome criterion_optimal_control() {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DivergenceKind kind = trial % 3 == 0 ? DivergenceKind::kSingleton
                                    : trial % 3 == 1 ? DivergenceKind::kKL
                                                     : DivergenceKind::kL1;
        const RobustMdp mdp = random_single_agent(rng, 2, 2, kind, 0.06);
        const auto [gb, greedy] = robust_optimal_control(mdp, 1e-10);
        double best = -std::numeric_limits<double>::infinity();
        for (int a0 = 0; a0 < 2; ++a0)
            for (int a1 = 0; a1 < 2; ++a1) {
                Mat det(2, Vec(2, 0.0));
                det[0][a0] = 1.0;
                det[1][a1] = 1.0;
                best = std::max(best, robust_policy_eval(mdp, det, 1e-10).gain);
            }
        worst = std::max(worst, std::abs(gb.gain - best));
    }
    require(worst <= 1e-6, "enumeration gap " + fmt(worst) + " > 1e-6");
    return {true, "max enumeration gap " + fmt(worst) + " on 20 instances"};
}

// ---- criterion 4: worst-case kernel construction ---------------------------

Outcome criterion_worst_kernel() {
    std::mt19937_64 rng(1004);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DivergenceKind kind =
            trial % 2 == 0 ? DivergenceKind::kKL : DivergenceKind::kL1;
        const int S = 2 + trial % 3;
        const RobustMdp mdp = random_single_agent(rng, S, 2, kind, 0.05);
        const Mat policy = testing::random_policy_rows(rng, S, 2);
        const GainBias gb = robust_policy_eval(mdp, policy, 1e-11);

        Vec reward(S, 0.0);
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < 2; ++a) reward[s] += policy[s][a] * mdp.reward(s, a);
        const double exact = oracles::exact_gain_bias(gb.worst_kernel, reward).gain;
        worst = std::max(worst, std::abs(exact - gb.gain));
    }
    require(worst <= 1e-6, "kernel gain gap " + fmt(worst) + " > 1e-6");
    return {true, "max kernel gain gap " + fmt(worst) + " on 20 instances"};
}

// ---- criteria 5 & 6: NE certification + span behavior ---------------------

std::vector<NashIterationResult> g_ne_runs;

Outcome criterion_ne_certification() {
    std::mt19937_64 rng(1005);
    g_ne_runs.clear();
    double worst_eps = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int S = 3 + trial % 2;
        const int A = 2 + trial % 2;
        const MarkovGame game =
            trial < 10 ? testing::random_zero_sum_game(rng, S, {A, A}, 0.05)
                       : testing::random_common_payoff_game(rng, S, {A, A}, 0.05);
        const NashIterationResult result = robust_nash_iteration_avg(game, 1e-8);
        g_ne_runs.push_back(result);
        const NeVerification check = verify_ne(game, result.policy, 1e-9);
        worst_eps = std::max(worst_eps, check.epsilon);
    }
    require(worst_eps <= 1e-4, "verify_ne eps " + fmt(worst_eps) + " > 1e-4");
    return {true, "max eps " + fmt(worst_eps) + " over 10 zero-sum + 10 common-payoff"};
}

Outcome criterion_span_behavior() {
    require(g_ne_runs.size() == 20, "prerequisite runs missing");
    double worst_span = 0.0, worst_const = 0.0, worst_gain = 0.0;
    for (const NashIterationResult& result : g_ne_runs) {
        worst_span = std::max(worst_span, result.terminal_span);
        for (std::size_t i = 0; i < result.terminal_diffs.size(); ++i) {
            const Vec& diff = result.terminal_diffs[i];
            const double mid = 0.5 * (*std::max_element(diff.begin(), diff.end()) +
                                      *std::min_element(diff.begin(), diff.end()));
            for (double d : diff) worst_const = std::max(worst_const, std::abs(d - mid));
            worst_gain = std::max(worst_gain, std::abs(mid - result.gains[i]));
        }
    }
    require(worst_span <= 1e-8, "terminal span " + fmt(worst_span) + " > 1e-8");
    require(worst_const <= 1e-7,
            "h - h0 deviates from a constant by " + fmt(worst_const));
    require(worst_gain <= 1e-8, "gain readoff gap " + fmt(worst_gain));
    return {true, "terminal span " + fmt(worst_span) + ", constancy defect " +
                      fmt(worst_const)};
}

// ---- criterion 7: discounted connection -----------------------------------

Outcome criterion_discounted_connection() {
    std::mt19937_64 rng(1007);
    const MarkovGame game = testing::random_zero_sum_game(rng, 5, {2, 2}, 0.02);
    const double eps = 0.05;
    const double diameter = robust_diameter_upper(game, 1e-10);
    const double gamma = discount_for_epsilon(std::max(1.0, diameter), eps);

    double worst_vg = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const JointPolicy pi = testing::random_joint_policy(rng, game);
        for (int agent = 0; agent < 2; ++agent) {
            const RobustMdp induced = induce_mdp(game, agent, pi);
            const double gain = robust_policy_eval(induced, pi.probs[agent], 1e-10).gain;
            const DiscountedValue dv =
                discounted_robust_eval(induced, pi.probs[agent], gamma, 1e-7);
            for (double v : dv.value)
                worst_vg = std::max(worst_vg, std::abs((1.0 - gamma) * v - gain));
        }
    }
    require(worst_vg <= eps, "|(1-gamma)V - g| " + fmt(worst_vg) + " > " + fmt(eps));

    const NashIterationResult disc =
        robust_nash_iteration_discounted(game, gamma, 1e-8);
    double disc_gap = 0.0;
    for (int agent = 0; agent < 2; ++agent) {
        const RobustMdp induced = induce_mdp(game, agent, disc.policy);
        const DiscountedValue own =
            discounted_robust_eval(induced, disc.policy.probs[agent], gamma, 1e-7);
        const auto [best, greedy] = discounted_robust_optimal(induced, gamma, 1e-7);
        for (int s = 0; s < game.num_states(); ++s)
            disc_gap = std::max(disc_gap, best.value[s] - own.value[s]);
    }
    require(disc_gap <= eps, "discounted NE gap " + fmt(disc_gap) + " > " + fmt(eps));

    const NeVerification avg_check = verify_ne(game, disc.policy, 1e-9);
    require(avg_check.epsilon <= 3.0 * eps + 1e-6,
            "avg eps " + fmt(avg_check.epsilon) + " > 3*eps");
    return {true, "diameter " + fmt(diameter) + ", gamma " + fmt(gamma) + ", |(1-g)V-g| " +
                      fmt(worst_vg) + ", avg eps " + fmt(avg_check.epsilon)};
}

// ---- criteria 8 & 9: seeded experiment trends ------------------------------

MarkovGame reference_env() {
    return generate_structured_env(StructuredEnvSpec::desk(10, 7));
}

Outcome criterion_figure1_trend() {
    const MarkovGame game = reference_env();
    const SweepResult sweep = run_figure1(game, default_gamma_grid(), 1e-8);
    require(std::isfinite(sweep.baseline), "baseline did not converge");

    double value_low = 0.0, value_high = 0.0;
    for (const auto& row : sweep.rows) {
        require(!row.failed, "gamma " + fmt(row.x) + " failed: " + row.note);
        require(row.value <= sweep.baseline + 1e-6,
                "discounted policy beat the average baseline at gamma " + fmt(row.x));
        if (row.x == 0.5) value_low = row.value;
        if (row.x == 0.99) value_high = row.value;
    }
    require(value_high >= value_low,
            "no improvement from gamma 0.5 to 0.99: " + fmt(value_low) + " vs " +
                fmt(value_high));
    return {true, "baseline " + fmt(sweep.baseline) + ", v(0.5) " + fmt(value_low) +
                      ", v(0.99) " + fmt(value_high)};
}

Outcome criterion_figure2_trend() {
    const MarkovGame game = reference_env();
    const long rounds = 30;
    const SweepResult sweep = run_figure2(game, rounds, 1e-8);
    require(sweep.rows.size() == 2 * static_cast<std::size_t>(rounds),
            "unexpected table size");
    const double robust_first = sweep.rows.front().value;
    const double robust_final = sweep.rows[rounds - 1].value;
    const double nominal_final = sweep.rows.back().value;
    require(robust_final >= nominal_final,
            "robust " + fmt(robust_final) + " < non-robust " + fmt(nominal_final));
    require(robust_final >= robust_first - 1e-6,
            "robust learner regressed: " + fmt(robust_first) + " -> " +
                fmt(robust_final));
    return {true, "robust " + fmt(robust_first) + " -> " + fmt(robust_final) +
                      ", non-robust " + fmt(nominal_final)};
}

// ---- criterion 10: support-function oracle equivalence --------------------

Outcome criterion_support_oracle() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const DivergenceKind kind =
            trial % 2 == 0 ? DivergenceKind::kKL : DivergenceKind::kL1;
        const UncertaintySet set =
            testing::random_ball(rng, 3, kind, 0.01 + 0.25 * unif(rng));
        const Vec v = testing::random_vector(rng, 3, -1.0, 1.0);
        worst = std::max(worst,
                         std::abs(sigma(set, v).value - oracles::grid_min_dot(set, v, 200)));
    }
    require(worst <= 1e-4, "grid disagreement " + fmt(worst) + " > 1e-4");

    double prop = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 4;
        const DivergenceKind kind = trial % 3 == 0   ? DivergenceKind::kSingleton
                                    : trial % 3 == 1 ? DivergenceKind::kKL
                                                     : DivergenceKind::kL1;
        const UncertaintySet set = testing::random_ball(rng, n, kind, 0.2 * unif(rng));
        const Vec v = testing::random_vector(rng, n, -2.0, 2.0);
        const Vec w = testing::random_vector(rng, n, -2.0, 2.0);
        const double sv = sigma(set, v).value;
        const double sw = sigma(set, w).value;

        prop = std::max(prop, std::abs(sv - sw) - sup_diff(v, w));  // Lipschitz
        const double c = 4.0 * unif(rng) - 2.0;
        Vec shifted = v;
        for (double& x : shifted) x += c;
        prop = std::max(prop, std::abs(sigma(set, shifted).value - (sv + c)));
        Vec larger = v;
        for (std::size_t j = 0; j < larger.size(); ++j) larger[j] += std::abs(w[j]);
        prop = std::max(prop, sv - sigma(set, larger).value);  // monotone
    }
    require(prop <= 1e-10, "property defect " + fmt(prop) + " > 1e-10");
    return {true, "grid gap " + fmt(worst) + ", property defect " + fmt(prop)};
}

// ---- criterion 11: span and operator-difference lemmas ---------------------

Outcome criterion_lemma_checks() {
    std::mt19937_64 rng(1011);
    double span_defect = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        Mat p(n);
        for (Vec& row : p) row = testing::random_distribution(rng, n, 0.01);
        const Vec v = testing::random_vector(rng, n, -3.0, 3.0);
        Vec pv(n, 0.0);
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) pv[s] += p[s][t] * v[t];
        span_defect = std::max(
            span_defect,
            span(pv) - (1.0 - oracles::ergodicity_coefficient(p)) * span(v));
    }
    require(span_defect <= 1e-12, "span lemma defect " + fmt(span_defect));

    double sandwich_defect = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4;
        const UncertaintySet set = testing::random_ball(rng, n, DivergenceKind::kKL, 0.08);
        const Vec v1 = testing::random_vector(rng, n, -1.5, 1.5);
        const Vec v2 = testing::random_vector(rng, n, -1.5, 1.5);
        const SupportResult r1 = sigma(set, v1);
        const SupportResult r2 = sigma(set, v2);
        Vec diff(n);
        for (int j = 0; j < n; ++j) diff[j] = v1[j] - v2[j];
        const double delta = r1.value - r2.value;
        sandwich_defect = std::max(sandwich_defect, dot(r1.minimizer, diff) - delta);
        sandwich_defect = std::max(sandwich_defect, delta - dot(r2.minimizer, diff));
    }
    require(sandwich_defect <= 1e-9, "sandwich defect " + fmt(sandwich_defect));
    return {true, "span defect " + fmt(span_defect) + ", sandwich defect " +
                      fmt(sandwich_defect)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "solvability witness (Bellman residual <= 1e-8)", criterion_solvability},
        {2, "robust gain vs grid oracle and sampled kernels", criterion_gain_correctness},
        {3, "optimal control vs deterministic enumeration", criterion_optimal_control},
        {4, "worst-case kernel reproduces the robust gain", criterion_worst_kernel},
        {5, "nash iteration reaches eps <= 1e-4 equilibria", criterion_ne_certification},
        {6, "terminal span and constant-difference behavior", criterion_span_behavior},
        {7, "discounted connection via the robust diameter", criterion_discounted_connection},
        {8, "figure 1 trend on the seeded environment", criterion_figure1_trend},
        {9, "figure 2 trend on the seeded environment", criterion_figure2_trend},
        {10, "support-function oracle equivalence and properties", criterion_support_oracle},
        {11, "span and operator-difference lemma checks", criterion_lemma_checks},
    };

    int passed = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = {false, e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("[%2d] %s  %-55s %s (%.1fs)\n", criterion.id,
                    outcome.ok ? "PASS" : "FAIL", criterion.name,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (outcome.ok) ++passed;
    }
    std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
