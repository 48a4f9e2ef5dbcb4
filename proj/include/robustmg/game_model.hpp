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

#include <cstdint>
#include <random>
#include <sstream>
#include <utility>

#include "robustmg/support_functions.hpp"
#include "robustmg/types.hpp"
#include "robustmg/uncertainty.hpp"

namespace robustmg {

/// Raw game description as it appears in the on-disk format. Joint actions
/// are flattened row-major in agent order (agent 0 is the most significant
/// digit); that ordering is part of the format contract.
struct GameSpec {
    int num_agents = 0;
    int num_states = 0;
    IndexVec actions_per_agent;
    std::vector<Mat> rewards;  // [agent][state][joint_action], original units
    std::vector<Mat> nominal;  // [state][joint_action] -> next-state distribution
    double theta = 0.0;
    std::string divergence = "kl";
};

class MarkovGame;

struct IrreducibilityReport {
    bool all_irreducible = true;
    long policies_checked = 0;
    bool exhaustive = false;
    IndexVec counterexample;  // per-state joint action of the failing policy
};

IrreducibilityReport check_irreducibility(const MarkovGame& game, bool force_full,
                                          std::uint64_t seed, int spot_samples);

struct BuildOptions {
    bool check_irreducibility = true;
    bool full_irreducibility = false;
    std::uint64_t seed = 1;
    int spot_samples = 32;
};

/// A distributionally robust Markov game: per-agent rewards (normalized to
/// [0,1]) and one uncertainty ball per (state, joint action). Immutable after
/// construction and safe to share across threads.
class MarkovGame {
  public:
    int num_agents() const { return num_agents_; }
    int num_states() const { return num_states_; }
    int num_actions(int agent) const { return actions_per_agent_[agent]; }
    const IndexVec& actions_per_agent() const { return actions_per_agent_; }
    int num_joint_actions() const { return num_joint_; }

    /// Normalized reward of `agent` at (state, joint action).
    double reward(int agent, int state, int joint) const {
        return rewards_[agent][state][joint];
    }
    double reward_original(int agent, int state, int joint) const {
        return normalization_.to_original(rewards_[agent][state][joint]);
    }
    const UncertaintySet& uncertainty(int state, int joint) const {
        return sets_[state][joint];
    }
    const AffineMap& normalization() const { return normalization_; }

    int joint_index(const IndexVec& actions) const {
        int idx = 0;
        for (int i = 0; i < num_agents_; ++i) idx = idx * actions_per_agent_[i] + actions[i];
        return idx;
    }

    IndexVec decompose(int joint) const {
        IndexVec actions(num_agents_);
        for (int i = num_agents_ - 1; i >= 0; --i) {
            actions[i] = joint % actions_per_agent_[i];
            joint /= actions_per_agent_[i];
        }
        return actions;
    }

    int agent_action(int joint, int agent) const {
        for (int i = num_agents_ - 1; i > agent; --i) joint /= actions_per_agent_[i];
        return joint % actions_per_agent_[agent];
    }

    /// Copy of the game with every ball's radius replaced. Used to strip or
    /// restore robustness while keeping rewards and normalization shared.
    MarkovGame with_radius(double theta) const {
        if (theta < 0.0) throw ModelError("negative uncertainty radius");
        MarkovGame copy = *this;
        for (auto& row : copy.sets_)
            for (auto& set : row) set.radius = theta;
        return copy;
    }

    friend MarkovGame build_game(const GameSpec& spec, const BuildOptions& options);

  private:
    int num_agents_ = 0;
    int num_states_ = 0;
    IndexVec actions_per_agent_;
    int num_joint_ = 0;
    std::vector<Mat> rewards_;                      // [agent][state][joint]
    std::vector<std::vector<UncertaintySet>> sets_;  // [state][joint]
    AffineMap normalization_;
};

/// Validates a raw description and produces a game with rewards affinely
/// rescaled into [0,1]. Rewards already inside [0,1] are kept verbatim
/// (identity map); the map is recorded for reporting in original units.
inline MarkovGame build_game(const GameSpec& spec, const BuildOptions& options = {}) {
    if (spec.num_agents < 1) throw ModelError("need at least one agent");
    if (spec.num_states < 2) throw ModelError("need at least two states");
    if (static_cast<int>(spec.actions_per_agent.size()) != spec.num_agents)
        throw ModelError("actions_per_agent size mismatch");
    long joint = 1;
    for (int a : spec.actions_per_agent) {
        if (a < 1) throw ModelError("each agent needs at least one action");
        joint *= a;
    }
    if (spec.theta < 0.0) throw ModelError("negative uncertainty radius");

    const int S = spec.num_states;
    const int A = static_cast<int>(joint);
    if (static_cast<int>(spec.rewards.size()) != spec.num_agents)
        throw ModelError("rewards: agent dimension mismatch");
    for (const Mat& per_agent : spec.rewards) {
        if (static_cast<int>(per_agent.size()) != S)
            throw ModelError("rewards: state dimension mismatch");
        for (const Vec& row : per_agent)
            if (static_cast<int>(row.size()) != A)
                throw ModelError("rewards: joint-action dimension mismatch");
    }
    if (static_cast<int>(spec.nominal.size()) != S)
        throw ModelError("nominal: state dimension mismatch");
    for (int s = 0; s < S; ++s) {
        if (static_cast<int>(spec.nominal[s].size()) != A)
            throw ModelError("nominal: joint-action dimension mismatch");
        for (int a = 0; a < A; ++a) {
            const Vec& row = spec.nominal[s][a];
            if (static_cast<int>(row.size()) != S)
                throw ModelError("nominal: next-state dimension mismatch");
            if (!is_distribution(row)) {
                std::ostringstream msg;
                msg << "non-stochastic nominal row at state " << s << ", joint action "
                    << a;
                throw ModelError(msg.str());
            }
        }
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Mat& per_agent : spec.rewards)
        for (const Vec& row : per_agent)
            for (double r : row) {
                if (!std::isfinite(r)) throw ModelError("non-finite reward");
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }

    AffineMap map;
    if (lo < 0.0 || hi > 1.0) {
        if (hi - lo < 1e-14) {
            map = {1.0, 0.5 - lo};  // constant rewards: shift into the interior
        } else {
            map = {1.0 / (hi - lo), -lo / (hi - lo)};
        }
    }

    MarkovGame game;
    game.num_agents_ = spec.num_agents;
    game.num_states_ = S;
    game.actions_per_agent_ = spec.actions_per_agent;
    game.num_joint_ = A;
    game.normalization_ = map;
    game.rewards_.resize(spec.num_agents);
    for (int i = 0; i < spec.num_agents; ++i) {
        game.rewards_[i].assign(S, Vec(A));
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a)
                game.rewards_[i][s][a] = map.to_normalized(spec.rewards[i][s][a]);
    }
    const DivergenceKind kind = divergence_from_string(spec.divergence);
    game.sets_.resize(S);
    for (int s = 0; s < S; ++s) {
        game.sets_[s].reserve(A);
        for (int a = 0; a < A; ++a)
            game.sets_[s].push_back({kind, spec.nominal[s][a], spec.theta});
    }

    if (options.check_irreducibility) {
        const IrreducibilityReport report = check_irreducibility(
            game, options.full_irreducibility, options.seed, options.spot_samples);
        if (!report.all_irreducible) {
            std::ostringstream msg;
            msg << "nominal chain is reducible under a deterministic joint policy"
                << " (checked " << report.policies_checked << " policies,"
                << (report.exhaustive ? " exhaustive)" : " spot check)");
            throw ModelError(msg.str());
        }
    }
    return game;
}

/// Product policy: one distribution over own actions per agent and state.
struct JointPolicy {
    std::vector<Mat> probs;  // [agent][state] -> distribution over that agent's actions

    static JointPolicy uniform(const MarkovGame& game) {
        JointPolicy pi;
        pi.probs.resize(game.num_agents());
        for (int i = 0; i < game.num_agents(); ++i)
            pi.probs[i].assign(game.num_states(),
                               Vec(game.num_actions(i), 1.0 / game.num_actions(i)));
        return pi;
    }

    /// choices[agent][state] -> action index.
    static JointPolicy deterministic(const MarkovGame& game,
                                     const std::vector<IndexVec>& choices) {
        JointPolicy pi;
        pi.probs.resize(game.num_agents());
        for (int i = 0; i < game.num_agents(); ++i) {
            pi.probs[i].assign(game.num_states(), Vec(game.num_actions(i), 0.0));
            for (int s = 0; s < game.num_states(); ++s)
                pi.probs[i][s].at(choices[i][s]) = 1.0;
        }
        return pi;
    }

    /// Validates the per-agent rows; `skip_agent` may be left uncovered (used
    /// when the policy only describes the opponents of one agent).
    void validate(const MarkovGame& game, int skip_agent = -1) const {
        if (static_cast<int>(probs.size()) != game.num_agents())
            throw ModelError("policy covers the wrong agent set");
        for (int i = 0; i < game.num_agents(); ++i) {
            if (i == skip_agent) continue;
            if (static_cast<int>(probs[i].size()) != game.num_states())
                throw ModelError("policy covers the wrong agent set");
            for (int s = 0; s < game.num_states(); ++s) {
                if (static_cast<int>(probs[i][s].size()) != game.num_actions(i) ||
                    !is_distribution(probs[i][s]))
                    throw ModelError("policy row is not a distribution");
            }
        }
    }

    /// Probability of the joint action under the product structure.
    double joint_prob(const MarkovGame& game, int state, int joint) const {
        double p = 1.0;
        for (int i = 0; i < game.num_agents(); ++i)
            p *= probs[i][state][game.agent_action(joint, i)];
        return p;
    }
};

/// r_i^pi(s) = sum_a prod_j pi_j(a_j|s) r_i(s,a).
inline Vec marginal_reward(const MarkovGame& game, const JointPolicy& policy, int agent) {
    if (agent < 0 || agent >= game.num_agents()) throw ModelError("agent index out of range");
    policy.validate(game);
    Vec r(game.num_states(), 0.0);
    for (int s = 0; s < game.num_states(); ++s)
        for (int a = 0; a < game.num_joint_actions(); ++a)
            r[s] += policy.joint_prob(game, s, a) * game.reward(agent, s, a);
    return r;
}

/// Single-agent robust MDP view. Each (state, action) carries a mixture of
/// uncertainty balls; its support function is the weight-averaged sum of the
/// member support functions, which is exact for induced games by
/// (s,a)-rectangularity. Owns all of its data.
class RobustMdp {
  public:
    struct MixtureComponent {
        double weight;
        UncertaintySet set;
    };

    RobustMdp(Mat rewards, std::vector<std::vector<std::vector<MixtureComponent>>> mixtures)
        : rewards_(std::move(rewards)), mix_(std::move(mixtures)) {
        num_states_ = static_cast<int>(rewards_.size());
        num_actions_ = num_states_ > 0 ? static_cast<int>(rewards_[0].size()) : 0;
    }

    /// Plain single-agent robust MDP with one ball per (s,a).
    static RobustMdp single_agent(Mat rewards, std::vector<std::vector<UncertaintySet>> sets) {
        std::vector<std::vector<std::vector<MixtureComponent>>> mix(rewards.size());
        for (std::size_t s = 0; s < rewards.size(); ++s) {
            mix[s].resize(rewards[s].size());
            for (std::size_t a = 0; a < rewards[s].size(); ++a) {
                sets[s][a].validate();
                mix[s][a].push_back({1.0, std::move(sets[s][a])});
            }
        }
        return RobustMdp(std::move(rewards), std::move(mix));
    }

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    double reward(int state, int action) const { return rewards_[state][action]; }
    const std::vector<MixtureComponent>& mixture(int state, int action) const {
        return mix_[state][action];
    }

    SupportResult sigma(int state, int action, const Vec& v) const {
        return combine(state, action, v, /*maximize=*/false);
    }
    SupportResult sigma_max(int state, int action, const Vec& v) const {
        return combine(state, action, v, /*maximize=*/true);
    }

  private:
    SupportResult combine(int state, int action, const Vec& v, bool maximize) const {
        const auto& components = mix_[state][action];
        if (components.size() == 1) {
            const auto& c = components.front();
            return maximize ? robustmg::sigma_max(c.set, v) : robustmg::sigma(c.set, v);
        }
        SupportResult out;
        out.minimizer.assign(v.size(), 0.0);
        for (const auto& c : components) {
            const SupportResult part =
                maximize ? robustmg::sigma_max(c.set, v) : robustmg::sigma(c.set, v);
            out.value += c.weight * part.value;
            for (std::size_t j = 0; j < v.size(); ++j)
                out.minimizer[j] += c.weight * part.minimizer[j];
        }
        return out;
    }

    int num_states_ = 0;
    int num_actions_ = 0;
    Mat rewards_;
    std::vector<std::vector<std::vector<MixtureComponent>>> mix_;
};

/// Builds the induced single-agent robust MDP of `agent`: rewards are
/// marginalized over the opponents' policy and each (s, a_i) ball becomes the
/// opponent-weighted mixture of the joint-action balls. `others` must cover
/// every agent except `agent`; its own row is ignored.
inline RobustMdp induce_mdp(const MarkovGame& game, int agent, const JointPolicy& others) {
    if (agent < 0 || agent >= game.num_agents()) throw ModelError("agent index out of range");
    others.validate(game, agent);

    const int S = game.num_states();
    const int Ai = game.num_actions(agent);
    Mat rewards(S, Vec(Ai, 0.0));
    std::vector<std::vector<std::vector<RobustMdp::MixtureComponent>>> mix(S);
    for (int s = 0; s < S; ++s) mix[s].resize(Ai);

    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < game.num_joint_actions(); ++a) {
            double w = 1.0;
            for (int j = 0; j < game.num_agents(); ++j) {
                if (j == agent) continue;
                w *= others.probs[j][s][game.agent_action(a, j)];
            }
            if (w == 0.0) continue;
            const int ai = game.agent_action(a, agent);
            rewards[s][ai] += w * game.reward(agent, s, a);
            mix[s][ai].push_back({w, game.uncertainty(s, a)});
        }
    }
    return RobustMdp(std::move(rewards), std::move(mix));
}

/// View of a one-agent game as a plain robust MDP.
inline RobustMdp single_agent_view(const MarkovGame& game) {
    JointPolicy none;
    none.probs.resize(game.num_agents());
    return induce_mdp(game, 0, none);
}

namespace detail {

inline bool strongly_connected(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> radj(n);
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) radj[v].push_back(u);
    const auto reaches_all = [n](const std::vector<std::vector<int>>& g) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : g[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
        }
        return count == n;
    };
    return reaches_all(adj) && reaches_all(radj);
}

inline bool policy_chain_irreducible(const MarkovGame& game, const IndexVec& joint_choice) {
    const int n = game.num_states();
    std::vector<std::vector<int>> adj(n);
    for (int s = 0; s < n; ++s) {
        const Vec& row = game.uncertainty(s, joint_choice[s]).nominal;
        for (int t = 0; t < n; ++t)
            if (row[t] > 0.0) adj[s].push_back(t);
    }
    return strongly_connected(adj);
}

}  // namespace detail

/// Checks that the nominal chain is irreducible under deterministic joint
/// policies. Exhaustive when the policy space is small (|S| <= 6 and at most
/// 8 joint actions) or when forced; otherwise a seeded spot check.
inline IrreducibilityReport check_irreducibility(const MarkovGame& game,
                                                 bool force_full = false,
                                                 std::uint64_t seed = 1,
                                                 int spot_samples = 64) {
    IrreducibilityReport report;
    const int S = game.num_states();
    const int A = game.num_joint_actions();

    double total = 1.0;
    for (int s = 0; s < S; ++s) total *= A;
    const bool full = force_full || (S <= 6 && A <= 8);

    if (full && total <= 4e6) {
        report.exhaustive = true;
        IndexVec choice(S, 0);
        while (true) {
            ++report.policies_checked;
            if (!detail::policy_chain_irreducible(game, choice)) {
                report.all_irreducible = false;
                report.counterexample = choice;
                return report;
            }
            int pos = S - 1;
            while (pos >= 0 && ++choice[pos] == A) choice[pos--] = 0;
            if (pos < 0) break;
        }
        return report;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, A - 1);
    for (int k = 0; k < spot_samples; ++k) {
        IndexVec choice(S);
        for (int s = 0; s < S; ++s) choice[s] = pick(rng);
        ++report.policies_checked;
        if (!detail::policy_chain_irreducible(game, choice)) {
            report.all_irreducible = false;
            report.counterexample = choice;
            return report;
        }
    }
    return report;
}

}  // namespace robustmg
