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

#include <catch2/catch_amalgamated.hpp>

#include "robustmg/oracles.hpp"
#include "test_helpers.hpp"

using namespace robustmg;
using namespace robustmg::oracles;
namespace testing = robustmg::testing;

namespace {

Mat random_kernel(std::mt19937_64& rng, int n) {
    Mat p(n);
    for (Vec& row : p) row = testing::random_distribution(rng, n);
    return p;
}

}  // namespace

TEST_CASE("exact gain/bias of the two-state swap chain", "[oracles]") {
    const ExactChainSolution sol = exact_gain_bias({{0, 1}, {1, 0}}, {0.0, 1.0});
    CHECK(sol.gain == Catch::Approx(0.5).margin(1e-12));
    CHECK(sol.stationary[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(sol.bias[0] == 0.0);
    CHECK(sol.bias[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("reducible chains are rejected", "[oracles]") {
    CHECK_THROWS_AS(exact_gain_bias({{1, 0}, {0, 1}}, {0.0, 1.0}), ModelError);
    CHECK_THROWS_AS(exact_gain_bias({{1, 0}, {1, 0}}, {0.0, 1.0}), ModelError);
}

TEST_CASE("stationary and Bellman self-checks on random chains", "[oracles]") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + trial % 4;
        const Mat p = random_kernel(rng, n);
        const Vec r = testing::random_vector(rng, n, 0.0, 1.0);
        const ExactChainSolution sol = exact_gain_bias(p, r);

        // mu P = mu
        for (int j = 0; j < n; ++j) {
            double lhs = 0.0;
            for (int i = 0; i < n; ++i) lhs += sol.stationary[i] * p[i][j];
            CHECK(std::abs(lhs - sol.stationary[j]) <= 1e-10);
        }
        // h + g 1 = r + P h
        for (int s = 0; s < n; ++s) {
            double rhs = r[s];
            for (int t = 0; t < n; ++t) rhs += p[s][t] * sol.bias[t];
            CHECK(std::abs(sol.bias[s] + sol.gain - rhs) <= 1e-10);
        }
    }
}

TEST_CASE("ergodicity coefficient", "[oracles]") {
    CHECK(ergodicity_coefficient({{0.3, 0.7}, {0.3, 0.7}}) ==
          Catch::Approx(1.0).margin(1e-15));
    CHECK(ergodicity_coefficient({{0, 1}, {1, 0}}) == Catch::Approx(0.0).margin(1e-15));

    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4;
        const Mat p = random_kernel(rng, n);
        const Vec v = testing::random_vector(rng, n, -3.0, 3.0);
        Vec pv(n, 0.0);
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) pv[s] += p[s][t] * v[t];
        CHECK(span(pv) <= (1.0 - ergodicity_coefficient(p)) * span(v) + 1e-12);
    }
}

TEST_CASE("feasible interval of two-state balls", "[oracles]") {
    const UncertaintySet point{DivergenceKind::kSingleton, {0.3, 0.7}, 0.0};
    CHECK(feasible_interval(point) == std::pair<double, double>{0.3, 0.3});

    const UncertaintySet l1{DivergenceKind::kL1, {0.6, 0.4}, 0.4};
    const auto [lo, hi] = feasible_interval(l1);
    CHECK(lo == Catch::Approx(0.4).margin(1e-12));
    CHECK(hi == Catch::Approx(0.8).margin(1e-12));

    const UncertaintySet kl{DivergenceKind::kKL, {0.5, 0.5}, 0.02};
    const auto [klo, khi] = feasible_interval(kl);
    CHECK(kl_divergence({klo, 1.0 - klo}, kl.nominal) == Catch::Approx(0.02).margin(1e-10));
    CHECK(kl_divergence({khi, 1.0 - khi}, kl.nominal) == Catch::Approx(0.02).margin(1e-10));
}

TEST_CASE("expected hitting times", "[oracles]") {
    const Vec swap = expected_hitting_times({{0, 1}, {1, 0}}, 1);
    CHECK(swap[0] == Catch::Approx(1.0).margin(1e-12));

    const Vec lazy = expected_hitting_times({{0.5, 0.5}, {0.5, 0.5}}, 1);
    CHECK(lazy[0] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("sampled rows stay inside the ball", "[oracles]") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 50; ++trial) {
        const DivergenceKind kind =
            trial % 2 == 0 ? DivergenceKind::kKL : DivergenceKind::kL1;
        const UncertaintySet set = testing::random_ball(rng, 3, kind, 0.1);
        const Vec q = sample_feasible_row(set, rng);
        CHECK(is_distribution(q, 1e-9));
        CHECK(divergence_of(set, q) <= set.radius + 1e-9);
    }
}

TEST_CASE("grid oracle approaches the vertex minimum on wide L1 balls", "[oracles]") {
    // Balls wide enough that the feasible intervals are large but still keep
    // every chain irreducible; the minimum then sits at interval endpoints.
    std::mt19937_64 rng(109);
    GameSpec spec = testing::random_game_spec(rng, 1, 2, {2}, 0.6, "l1");
    for (auto& per_action : spec.nominal)
        for (auto& row : per_action) row = {0.5, 0.5};  // intervals [0.2, 0.8]
    const MarkovGame game = build_game(spec);
    const JointPolicy policy = testing::random_joint_policy(rng, game);

    const double grid = worst_case_gain_grid(game, policy, 0, 200);

    const Vec reward = marginal_reward(game, policy, 0);
    double vertex_min = std::numeric_limits<double>::infinity();
    std::array<std::pair<double, double>, 4> intervals;
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            intervals[s * 2 + a] = feasible_interval(game.uncertainty(s, a));
    for (int mask = 0; mask < 16; ++mask) {
        Mat chain(2, Vec(2, 0.0));
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) {
                const auto [lo, hi] = intervals[s * 2 + a];
                const double t = (mask >> (s * 2 + a)) & 1 ? hi : lo;
                chain[s][0] += policy.joint_prob(game, s, a) * t;
                chain[s][1] += policy.joint_prob(game, s, a) * (1.0 - t);
            }
        if (chain[0][1] <= 0.0 || chain[1][0] <= 0.0) continue;
        vertex_min = std::min(vertex_min, exact_gain_bias(chain, reward).gain);
    }
    CHECK(grid == Catch::Approx(vertex_min).margin(1e-6));
}

TEST_CASE("worst-case grid oracle rejects large instances", "[oracles]") {
    std::mt19937_64 rng(113);
    const MarkovGame big = testing::random_game(rng, 1, 4, {2}, 0.05, "kl");
    CHECK_THROWS_AS(worst_case_gain_grid(big, JointPolicy::uniform(big), 0), ModelError);
}
