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

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "robustmg/oracles.hpp"
#include "robustmg/robustmg.hpp"

namespace fs = std::filesystem;
using namespace robustmg;

namespace {

struct Options {
    std::string input;
    std::string output_dir = "robustmg_out";
    double tol = kNashTol;
    long max_rounds = kNashMaxRounds;
    double gamma = 0.99;
    double epsilon = 1e-4;
    std::uint64_t seed = 7;
    std::vector<std::uint64_t> seeds;
    int states = 20;
    int actions = 5;
    double theta = 0.01;
    std::vector<double> grid;
    long rounds = 30;
    bool full_irreducibility = false;
};

void add_env_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--seed", opt.seed, "environment seed");
    cmd->add_option("--states", opt.states, "number of states");
    cmd->add_option("--actions", opt.actions, "actions per agent");
    cmd->add_option("--theta", opt.theta, "uncertainty radius of the KL ball");
}

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--output-dir", opt.output_dir, "directory for result files");
    cmd->add_option("--tol", opt.tol, "solver tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-rounds", opt.max_rounds, "iteration budget");
    cmd->add_flag("--full-irreducibility-check", opt.full_irreducibility,
                  "enumerate every deterministic policy in the validity check");
}

MarkovGame load_game(const Options& opt) {
    BuildOptions build;
    build.full_irreducibility = opt.full_irreducibility;
    return build_game(load_game_spec(opt.input), build);
}

nlohmann::json config_json(const Options& opt) {
    nlohmann::json j;
    j["input"] = opt.input;
    j["output_dir"] = opt.output_dir;
    j["tol"] = opt.tol;
    j["max_rounds"] = opt.max_rounds;
    j["gamma"] = opt.gamma;
    j["epsilon"] = opt.epsilon;
    j["seed"] = opt.seed;
    j["seeds"] = opt.seeds;
    j["states"] = opt.states;
    j["actions"] = opt.actions;
    j["theta"] = opt.theta;
    j["grid"] = opt.grid;
    j["rounds"] = opt.rounds;
    j["full_irreducibility_check"] = opt.full_irreducibility;
    return j;
}

std::string histogram_line(const NashIterationResult& result) {
    std::ostringstream out;
    out << "global_optimal=" << result.oracle_histogram[0]
        << " saddle_point=" << result.oracle_histogram[1]
        << " general_bimatrix=" << result.oracle_histogram[2];
    if (result.used_heuristic_oracle()) out << "  (heuristic oracle)";
    return out.str();
}

void print_solve_summary(const MarkovGame& game, const NashIterationResult& result,
                         const NeVerification& check) {
    const AffineMap& map = game.normalization();
    std::cout << "rounds:        " << result.rounds << "\n";
    std::cout << "terminal span: " << result.terminal_span << "\n";
    std::cout << "oracle paths:  " << histogram_line(result) << "\n";
    for (int i = 0; i < game.num_agents(); ++i) {
        std::cout << "gain[" << i << "]:       " << result.gains[i] << " normalized, "
                  << map.to_original(result.gains[i]) << " original units\n";
    }
    std::cout << "verify_ne eps: " << check.epsilon << " normalized, "
              << map.to_original_relative(check.epsilon) << " original units\n";
}

int run_solve(const Options& opt, bool discounted) {
    const MarkovGame game = load_game(opt);
    const fs::path dir = opt.output_dir;
    fs::create_directories(dir);

    const NashIterationResult result =
        discounted
            ? robust_nash_iteration_discounted(game, opt.gamma, opt.tol, opt.max_rounds)
            : robust_nash_iteration_avg(game, opt.tol, opt.max_rounds);
    const NeVerification check = verify_ne(game, result.policy);

    if (discounted) std::cout << "gamma:         " << opt.gamma << "\n";
    print_solve_summary(game, result, check);

    save_policy(dir / "policy.json", result.policy);
    write_manifest(dir, discounted ? "solve-discounted" : "solve-avg", config_json(opt));
    std::cout << "policy written to " << (dir / "policy.json").string() << "\n";
    return 0;
}

int run_diameter(const Options& opt) {
    const MarkovGame game = load_game(opt);
    const fs::path dir = opt.output_dir;
    fs::create_directories(dir);
    const double diameter = robust_diameter_upper(game, opt.tol);
    std::cout << "robust diameter upper bound: " << diameter << "\n";
    std::cout << "discount for epsilon " << opt.epsilon << ": "
              << discount_for_epsilon(std::max(1.0, diameter), opt.epsilon) << "\n";
    nlohmann::json j;
    j["diameter_upper"] = diameter;
    write_text_file(dir / "diameter.json", j.dump(2) + "\n");
    write_manifest(dir, "diameter", config_json(opt));
    return 0;
}

StructuredEnvSpec env_from(const Options& opt, std::uint64_t seed) {
    StructuredEnvSpec env = StructuredEnvSpec::desk(opt.states, seed);
    env.actions_per_agent = opt.actions;
    env.theta = opt.theta;
    return env;
}

int run_gen_env(const Options& opt) {
    const fs::path dir = opt.output_dir;
    fs::create_directories(dir);
    const GameSpec spec = generate_structured_spec(env_from(opt, opt.seed));
    save_game_spec(dir / "game.json", spec);
    write_manifest(dir, "gen-env", config_json(opt));
    std::cout << "environment written to " << (dir / "game.json").string() << "\n";
    return 0;
}

int run_figure(const Options& opt, int which) {
    const fs::path dir = opt.output_dir;
    fs::create_directories(dir);
    std::vector<std::uint64_t> seeds = opt.seeds.empty()
                                           ? std::vector<std::uint64_t>{opt.seed}
                                           : opt.seeds;
    const Vec grid = opt.grid.empty() ? default_gamma_grid() : Vec(opt.grid);

    std::string csv;
    SweepResult last;
    SweepResult combined;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        BuildOptions build;
        build.full_irreducibility = opt.full_irreducibility;
        const MarkovGame game = generate_structured_env(env_from(opt, seeds[k]), build);
        SweepResult sweep = which == 1 ? run_figure1(game, grid, opt.tol, opt.max_rounds)
                                       : run_figure2(game, opt.rounds, opt.tol);
        if (seeds.size() > 1)
            for (auto& row : sweep.rows)
                row.oracle_class += "/seed" + std::to_string(seeds[k]);
        csv += sweep_to_csv(sweep, /*header=*/k == 0);
        combined.baseline = sweep.baseline;
        combined.rows.insert(combined.rows.end(), sweep.rows.begin(), sweep.rows.end());
        last = std::move(sweep);
    }

    const std::string stem = which == 1 ? "figure1" : "figure2";
    write_text_file(dir / (stem + ".csv"), csv);
    const std::string title =
        which == 1 ? "Worst-case average reward of player 1 vs discount factor"
                   : "Worst-case average reward of player 1 during training";
    const std::string x_label = which == 1 ? "discount factor" : "round";
    write_text_file(dir / (stem + ".svg"), sweep_to_svg(combined, title, x_label));
    write_manifest(dir, stem, config_json(opt));

    std::cout << "baseline: " << last.baseline << "\n";
    std::cout << "rows:     " << combined.rows.size() << "\n";
    std::cout << "tables in " << (dir / (stem + ".csv")).string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solvers and experiment pipelines for distributionally robust "
                 "Markov games under the average-reward criterion"};
    app.require_subcommand(1);
    Options opt;
    std::string policy_path;

    CLI::App* solve_avg = app.add_subcommand(
        "solve-avg", "robust Nash iteration under the average reward");
    solve_avg->add_option("--input", opt.input, "game description file")->required();
    add_common_flags(solve_avg, opt);

    CLI::App* solve_disc = app.add_subcommand(
        "solve-discounted", "robust Nash iteration under the discounted reward");
    solve_disc->add_option("--input", opt.input, "game description file")->required();
    solve_disc->add_option("--gamma", opt.gamma, "discount factor")
        ->check(CLI::Range(0.0, 0.999999));
    add_common_flags(solve_disc, opt);

    CLI::App* verify = app.add_subcommand("verify", "deviation gaps of a joint policy");
    verify->add_option("--input", opt.input, "game description file")->required();
    verify->add_option("--policy", policy_path, "policy file")->required();
    verify->add_option("--epsilon", opt.epsilon, "acceptance threshold on eps");
    add_common_flags(verify, opt);

    CLI::App* diameter = app.add_subcommand("diameter", "robust diameter upper bound");
    diameter->add_option("--input", opt.input, "game description file")->required();
    diameter->add_option("--epsilon", opt.epsilon, "target average-reward accuracy");
    add_common_flags(diameter, opt);

    CLI::App* gen_env = app.add_subcommand("gen-env", "write a structured random game");
    add_env_flags(gen_env, opt);
    add_common_flags(gen_env, opt);

    CLI::App* figure1 = app.add_subcommand(
        "figure1", "average vs discounted equilibrium sweep (CSV + SVG)");
    add_env_flags(figure1, opt);
    figure1->add_option("--grid", opt.grid, "discount factor grid");
    figure1->add_option("--seeds", opt.seeds, "run several seeds, concatenating tables");
    add_common_flags(figure1, opt);

    CLI::App* figure2 = app.add_subcommand(
        "figure2", "robust vs non-robust learning trace (CSV + SVG)");
    add_env_flags(figure2, opt);
    figure2->add_option("--rounds", opt.rounds, "training rounds to trace");
    figure2->add_option("--seeds", opt.seeds, "run several seeds, concatenating tables");
    add_common_flags(figure2, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_avg->parsed()) return run_solve(opt, false);
        if (solve_disc->parsed()) return run_solve(opt, true);
        if (verify->parsed()) {
            const MarkovGame game = load_game(opt);
            const JointPolicy policy = load_policy(policy_path, game);
            const NeVerification check = verify_ne(game, policy, opt.tol);
            const fs::path dir = opt.output_dir;
            fs::create_directories(dir);
            for (int i = 0; i < game.num_agents(); ++i)
                std::cout << "deviation gap[" << i << "]: " << check.gaps[i] << "\n";
            std::cout << "eps: " << check.epsilon << " normalized, "
                      << game.normalization().to_original_relative(check.epsilon)
                      << " original units\n";
            write_manifest(dir, "verify", config_json(opt));
            return check.epsilon <= opt.epsilon ? 0 : 2;
        }
        if (diameter->parsed()) return run_diameter(opt);
        if (gen_env->parsed()) return run_gen_env(opt);
        if (figure1->parsed()) return run_figure(opt, 1);
        if (figure2->parsed()) return run_figure(opt, 2);
    } catch (const ModelError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const MaxIterExceeded& e) {
        std::cerr << "solver failure: " << e.what() << " (residual " << e.residual
                  << ")\n";
        const fs::path dir = opt.output_dir;
        fs::create_directories(dir);
        nlohmann::json j;
        j["error"] = "max_iter_exceeded";
        j["message"] = e.what();
        j["residual"] = e.residual;
        j["iterations"] = e.iterations;
        j["span_trace"] = e.trace;
        write_text_file(dir / "diagnostics.json", j.dump(2) + "\n");
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        const fs::path dir = opt.output_dir;
        fs::create_directories(dir);
        nlohmann::json j;
        j["error"] = "solver";
        j["message"] = e.what();
        write_text_file(dir / "diagnostics.json", j.dump(2) + "\n");
        return 2;
    }
    return 1;
}
