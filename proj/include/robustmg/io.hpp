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

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "robustmg/game_model.hpp"

namespace robustmg {

inline constexpr const char* kToolVersion = "0.1.0";

/// Game description format: {agents, states, actions_per_agent,
/// rewards[i][s][a_joint], nominal[s][a_joint][s'], theta, divergence}.
/// Joint actions are flattened row-major in agent order; the ordering is
/// part of the contract.
inline nlohmann::json game_spec_to_json(const GameSpec& spec) {
    nlohmann::json j;
    j["agents"] = spec.num_agents;
    j["states"] = spec.num_states;
    j["actions_per_agent"] = spec.actions_per_agent;
    j["rewards"] = spec.rewards;
    j["nominal"] = spec.nominal;
    j["theta"] = spec.theta;
    j["divergence"] = spec.divergence;
    return j;
}

inline GameSpec game_spec_from_json(const nlohmann::json& j) {
    GameSpec spec;
    try {
        spec.num_agents = j.at("agents").get<int>();
        spec.num_states = j.at("states").get<int>();
        spec.actions_per_agent = j.at("actions_per_agent").get<IndexVec>();
        spec.rewards = j.at("rewards").get<std::vector<Mat>>();
        spec.nominal = j.at("nominal").get<std::vector<Mat>>();
        spec.theta = j.at("theta").get<double>();
        spec.divergence = j.at("divergence").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("malformed game description: ") + e.what());
    }
    return spec;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot open for writing: " + path.string());
    out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open for reading: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void save_game_spec(const std::filesystem::path& path, const GameSpec& spec) {
    write_text_file(path, game_spec_to_json(spec).dump(2) + "\n");
}

inline GameSpec load_game_spec(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("cannot parse game file: ") + e.what());
    }
    return game_spec_from_json(j);
}

/// Policy format: per agent -> per state -> probability list over that
/// agent's actions. Probabilities are re-validated against the game on load.
inline nlohmann::json policy_to_json(const JointPolicy& policy) {
    nlohmann::json j;
    j["policy"] = policy.probs;
    return j;
}

inline JointPolicy policy_from_json(const nlohmann::json& j) {
    JointPolicy pi;
    try {
        pi.probs = j.at("policy").get<std::vector<Mat>>();
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("malformed policy file: ") + e.what());
    }
    return pi;
}

inline void save_policy(const std::filesystem::path& path, const JointPolicy& policy) {
    write_text_file(path, policy_to_json(policy).dump(2) + "\n");
}

inline JointPolicy load_policy(const std::filesystem::path& path, const MarkovGame& game) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("cannot parse policy file: ") + e.what());
    }
    JointPolicy pi = policy_from_json(j);
    pi.validate(game);
    return pi;
}

/// Every run drops a manifest next to its outputs: the resolved config plus
/// tool version, so a run can be reproduced byte for byte. Deliberately no
/// timestamps.
inline void write_manifest(const std::filesystem::path& dir, const std::string& subcommand,
                           const nlohmann::json& config) {
    nlohmann::json j;
    j["tool"] = "robustmg";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace robustmg
