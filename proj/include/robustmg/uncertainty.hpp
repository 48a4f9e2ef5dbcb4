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

#include <string>

#include "robustmg/types.hpp"

namespace robustmg {

enum class DivergenceKind { kSingleton, kKL, kL1 };

inline std::string to_string(DivergenceKind kind) {
    switch (kind) {
    case DivergenceKind::kSingleton: return "singleton";
    case DivergenceKind::kKL: return "kl";
    case DivergenceKind::kL1: return "l1";
    }
    return "?";
}

inline DivergenceKind divergence_from_string(const std::string& s) {
    if (s == "singleton") return DivergenceKind::kSingleton;
    if (s == "kl") return DivergenceKind::kKL;
    if (s == "l1") return DivergenceKind::kL1;
    throw ModelError("unknown divergence kind: " + s);
}

/// One (s,a)-rectangular ball of next-state distributions: all q with
/// divergence(q, nominal) <= radius. A radius of zero collapses any kind to
/// the singleton {nominal}.
struct UncertaintySet {
    DivergenceKind kind = DivergenceKind::kSingleton;
    Vec nominal;
    double radius = 0.0;

    void validate() const {
        if (!is_distribution(nominal))
            throw ModelError("uncertainty set nominal is not a distribution");
        if (!(radius >= 0.0)) throw ModelError("negative uncertainty radius");
    }

    bool is_singleton() const {
        return kind == DivergenceKind::kSingleton || radius == 0.0;
    }
};

/// KL(q || p); +inf when q puts mass outside the support of p.
inline double kl_divergence(const Vec& q, const Vec& p) {
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] <= 0.0) continue;
        if (p[j] <= 0.0) return std::numeric_limits<double>::infinity();
        d += q[j] * std::log(q[j] / p[j]);
    }
    return d;
}

inline double l1_distance(const Vec& q, const Vec& p) {
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) d += std::abs(q[j] - p[j]);
    return d;
}

/// Divergence of q from the set's nominal under the set's own kind.
/// Singleton reports the L1 distance so that membership keeps a meaningful
/// tolerance semantics.
inline double divergence_of(const UncertaintySet& set, const Vec& q) {
    switch (set.kind) {
    case DivergenceKind::kSingleton: return l1_distance(q, set.nominal);
    case DivergenceKind::kKL: return kl_divergence(q, set.nominal);
    case DivergenceKind::kL1: return l1_distance(q, set.nominal);
    }
    return std::numeric_limits<double>::infinity();
}

inline bool contains(const UncertaintySet& set, const Vec& q, double tol = 1e-9) {
    if (!is_distribution(q, 1e-9)) return false;
    if (set.is_singleton()) return l1_distance(q, set.nominal) <= tol;
    return divergence_of(set, q) <= set.radius + tol;
}

}  // namespace robustmg
