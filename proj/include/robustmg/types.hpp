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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustmg {

using Vec = std::vector<double>;
/// Dense row-major matrix: a vector of rows.
using Mat = std::vector<Vec>;
using IndexVec = std::vector<int>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr long kDefaultMaxIter = 1000000;
/// Tolerance for probability rows summing to one.
inline constexpr double kDistributionTol = 1e-12;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Span seminorm sp(v) = max(v) - min(v).
inline double span(const Vec& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

inline double sup_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double sup_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline bool is_distribution(const Vec& p, double tol = kDistributionTol) {
    double s = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
        s += x;
    }
    return std::abs(s - 1.0) <= tol;
}

inline bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Validation failure of a model input (non-stochastic row, dimension
/// mismatch, negative radius, malformed policy, ...).
class ModelError : public std::runtime_error {
  public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver ran out of its iteration budget. Carries the last
/// residual and, for round-based solvers, the residual trace.
class MaxIterExceeded : public std::runtime_error {
  public:
    MaxIterExceeded(const std::string& what, double residual, long iterations,
                    Vec trace = {})
        : std::runtime_error(what), residual(residual), iterations(iterations),
          trace(std::move(trace)) {}

    double residual;
    long iterations;
    Vec trace;
};

class UnsupportedGameClass : public std::runtime_error {
  public:
    explicit UnsupportedGameClass(const std::string& what) : std::runtime_error(what) {}
};

class NoEquilibriumFound : public std::runtime_error {
  public:
    explicit NoEquilibriumFound(const std::string& what) : std::runtime_error(what) {}
};

/// A hitting-time iteration blew past its divergence guard, which signals an
/// unreachable state under the worst-case kernel.
class DivergenceError : public std::runtime_error {
  public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// The reward normalization map r_norm = scale * r_orig + offset. The same
/// map transforms gains; biases transform by the scale alone.
struct AffineMap {
    double scale = 1.0;
    double offset = 0.0;

    double to_normalized(double x) const { return scale * x + offset; }
    double to_original(double x) const { return (x - offset) / scale; }
    double to_original_relative(double x) const { return x / scale; }
    bool is_identity() const { return scale == 1.0 && offset == 0.0; }
};

}  // namespace robustmg
