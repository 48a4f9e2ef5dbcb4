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
#include "robustmg/support_functions.hpp"
#include "test_helpers.hpp"

using namespace robustmg;
namespace testing = robustmg::testing;

TEST_CASE("singleton support function is the nominal expectation", "[support]") {
    const UncertaintySet set{DivergenceKind::kSingleton, {0.3, 0.2, 0.5}, 0.0};
    const Vec v{1.0, -2.0, 0.7};
    const SupportResult res = sigma(set, v);
    CHECK(res.value == Catch::Approx(dot(set.nominal, v)).margin(1e-15));
    CHECK(res.minimizer == set.nominal);

    // Radius zero turns any kind into the singleton behavior.
    const UncertaintySet kl0{DivergenceKind::kKL, {0.3, 0.2, 0.5}, 0.0};
    CHECK(sigma(kl0, v).value == Catch::Approx(res.value).margin(1e-15));
}

TEST_CASE("constant vectors give the constant for every kind", "[support]") {
    std::mt19937_64 rng(11);
    const Vec v{0.8, 0.8, 0.8};
    for (const DivergenceKind kind :
         {DivergenceKind::kSingleton, DivergenceKind::kKL, DivergenceKind::kL1}) {
        const UncertaintySet set = testing::random_ball(rng, 3, kind, 0.2);
        CHECK(sigma(set, v).value == Catch::Approx(0.8).margin(1e-12));
        CHECK(sigma_max(set, v).value == Catch::Approx(0.8).margin(1e-12));
    }
}

TEST_CASE("KL ball reference value", "[support]") {
    // Independently computed: dual solve cross-checked against a 1e5-point
    // simplex grid and an SLSQP solve.
    const UncertaintySet set{DivergenceKind::kKL, {0.5, 0.5}, 0.01};
    const SupportResult res = sigma(set, {0.0, 1.0});
    CHECK(res.value == Catch::Approx(0.4294074324).margin(1e-8));
    CHECK(kl_divergence(res.minimizer, set.nominal) ==
          Catch::Approx(0.01).margin(1e-9));
    CHECK(res.value ==
          Catch::Approx(oracles::grid_min_dot(set, {0.0, 1.0}, 10000)).margin(1e-4));

    const UncertaintySet set3{DivergenceKind::kKL, {0.2, 0.3, 0.5}, 0.05};
    CHECK(sigma(set3, {1.0, -0.5, 0.25}).value ==
          Catch::Approx(0.0108978475).margin(1e-8));
}

TEST_CASE("KL ball wide enough to reach the minimizing face", "[support]") {
    const UncertaintySet set{DivergenceKind::kKL, {0.5, 0.5}, 2.0};
    const SupportResult res = sigma(set, {0.0, 1.0});
    // theta >= -log(0.5): all mass moves to the cheap state exactly.
    CHECK(res.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(res.minimizer[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("KL ball excludes states outside the nominal support", "[support]") {
    const UncertaintySet set{DivergenceKind::kKL, {0.6, 0.4, 0.0}, 0.1};
    Vec v{0.5, 0.9, -5.0};
    const SupportResult res = sigma(set, v);
    CHECK(res.minimizer[2] == 0.0);
    // The dead state's value must not matter.
    v[2] = 100.0;
    CHECK(sigma(set, v).value == Catch::Approx(res.value).margin(1e-12));
}

TEST_CASE("L1 greedy mass shift", "[support]") {
    const UncertaintySet set{DivergenceKind::kL1, {1.0, 0.0}, 0.4};
    const SupportResult up = sigma_max(set, {0.0, 1.0});
    CHECK(up.value == Catch::Approx(0.2).margin(1e-12));
    CHECK(up.minimizer[1] == Catch::Approx(0.2).margin(1e-12));

    // Verified against the interval oracle.
    const UncertaintySet ball{DivergenceKind::kL1, {0.6, 0.4}, 0.3};
    const Vec v{0.9, 0.1};
    CHECK(sigma(ball, v).value ==
          Catch::Approx(oracles::grid_min_dot(ball, v, 5000)).margin(1e-6));
}

TEST_CASE("support function properties on random balls", "[support]") {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 4;
        const DivergenceKind kind =
            trial % 3 == 0 ? DivergenceKind::kL1
                           : (trial % 3 == 1 ? DivergenceKind::kKL
                                             : DivergenceKind::kSingleton);
        const UncertaintySet set = testing::random_ball(rng, n, kind, 0.01 + 0.3 * unif(rng));
        const Vec v = testing::random_vector(rng, n, -2.0, 2.0);
        const Vec w = testing::random_vector(rng, n, -2.0, 2.0);

        const SupportResult rv = sigma(set, v);
        const SupportResult rw = sigma(set, w);

        // Member of the ball, attaining the value.
        CHECK(is_distribution(rv.minimizer, 1e-9));
        CHECK(divergence_of(set, rv.minimizer) <= set.radius + 1e-9);
        CHECK(std::abs(dot(rv.minimizer, v) - rv.value) <= 1e-9);

        // 1-Lipschitz in sup norm.
        CHECK(std::abs(rv.value - rw.value) <= sup_diff(v, w) + 1e-12);

        // Translation by a constant.
        const double c = unif(rng) * 4.0 - 2.0;
        Vec shifted = v;
        for (double& x : shifted) x += c;
        CHECK(sigma(set, shifted).value == Catch::Approx(rv.value + c).margin(1e-10));

        // Monotonicity: V <= V + |W| componentwise.
        Vec larger = v;
        for (std::size_t j = 0; j < larger.size(); ++j) larger[j] += std::abs(w[j]);
        CHECK(sigma(set, larger).value >= rv.value - 1e-12);

        // Min never exceeds max; strict unless degenerate.
        const SupportResult rmax = sigma_max(set, v);
        CHECK(rv.value <= rmax.value + 1e-12);
        if (!set.is_singleton() && span(v) > 1e-6)
            CHECK(rmax.value - rv.value > 0.0);
    }
}

TEST_CASE("grid oracle agreement on three-state balls", "[support]") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const DivergenceKind kind =
            trial % 2 == 0 ? DivergenceKind::kKL : DivergenceKind::kL1;
        const UncertaintySet set = testing::random_ball(rng, 3, kind, 0.02 + 0.2 * unif(rng));
        const Vec v = testing::random_vector(rng, 3, -1.0, 1.0);
        const double grid = oracles::grid_min_dot(set, v, 200);
        CHECK(std::abs(sigma(set, v).value - grid) <= 1e-4);
    }
}

TEST_CASE("operator difference is sandwiched by the two minimizers", "[support]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const UncertaintySet set = testing::random_ball(rng, 4, DivergenceKind::kKL, 0.08);
        const Vec v1 = testing::random_vector(rng, 4, -1.5, 1.5);
        const Vec v2 = testing::random_vector(rng, 4, -1.5, 1.5);
        const SupportResult r1 = sigma(set, v1);
        const SupportResult r2 = sigma(set, v2);
        Vec diff(4);
        for (int j = 0; j < 4; ++j) diff[j] = v1[j] - v2[j];
        const double delta = r1.value - r2.value;
        CHECK(delta >= dot(r1.minimizer, diff) - 1e-9);
        CHECK(delta <= dot(r2.minimizer, diff) + 1e-9);
    }
}

TEST_CASE("invalid inputs are rejected", "[support]") {
    const UncertaintySet set{DivergenceKind::kKL, {0.5, 0.5}, 0.1};
    CHECK_THROWS_AS(sigma(set, {1.0}), ModelError);
    CHECK_THROWS_AS(sigma(set, {1.0, std::numeric_limits<double>::infinity()}),
                    ModelError);
    const UncertaintySet bad{DivergenceKind::kKL, {0.6, 0.5}, 0.1};
    CHECK_THROWS_AS(bad.validate(), ModelError);
}
