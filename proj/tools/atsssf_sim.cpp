#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atsssf/commands.hpp"

namespace {

using atsssf::ConfigOverrides;

struct CommonFlags {
    std::string config_path;
    std::string seed, rounds, clients, out, adversaries, strategy;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (key = value lines)");
        cmd->add_option("--seed", seed, "rng seed");
        cmd->add_option("--rounds", rounds, "communication rounds");
        cmd->add_option("--clients", clients, "number of clients");
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--adversaries", adversaries,
                        "adversary spec COUNT:BEHAVIOR[:PARAM], e.g. 2:label_flip:1.0");
    }

    ConfigOverrides overrides() const {
        ConfigOverrides ov;
        if (!seed.empty()) ov.emplace_back("seed", seed);
        if (!rounds.empty()) ov.emplace_back("rounds", rounds);
        if (!clients.empty()) ov.emplace_back("clients", clients);
        if (!out.empty()) ov.emplace_back("out", out);
        if (!strategy.empty()) ov.emplace_back("strategy", strategy);
        if (!adversaries.empty()) {
            std::stringstream ss(adversaries);
            std::string count, behavior, param;
            std::getline(ss, count, ':');
            std::getline(ss, behavior, ':');
            std::getline(ss, param, ':');
            if (count.empty() || behavior.empty())
                throw std::invalid_argument(
                    "--adversaries: expected COUNT:BEHAVIOR[:PARAM], got '" + adversaries + "'");
            ov.emplace_back("adversaries.count", count);
            ov.emplace_back("adversaries.behavior", behavior);
            if (!param.empty()) {
                if (behavior == "noisy_update")
                    ov.emplace_back("adversaries.noise_sigma", param);
                else
                    ov.emplace_back("adversaries.flip_fraction", param);
            }
        }
        return ov;
    }

    atsssf::ExperimentConfig build() const {
        if (config_path.empty()) return atsssf::config_from_overrides(overrides());
        return atsssf::parse_config(config_path, overrides());
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trust-aware federated learning simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags, compare_flags, export_flags;
    bool checkpoint = false;
    std::string strategies_arg = "fedavg_baseline,atsssf_static,atsssf_adaptive";

    CLI::App* run = app.add_subcommand("run", "run a single strategy");
    run_flags.attach(run);
    run->add_option("--strategy", run_flags.strategy,
                    "fedavg_baseline | atsssf_static | atsssf_adaptive");
    run->add_flag("--checkpoint", checkpoint, "also dump the final model parameters");

    CLI::App* compare = app.add_subcommand("compare", "run several strategies on shared data");
    compare_flags.attach(compare);
    compare->add_option("--strategies", strategies_arg, "comma-separated strategy list");

    CLI::App* exp = app.add_subcommand("export-dataset", "write the raw synthetic dataset");
    export_flags.attach(exp);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto config = run_flags.build();
            const auto result = atsssf::run_command(config, checkpoint);
            std::cout << "strategy " << atsssf::strategy_name(config.strategy)
                      << ": final accuracy " << result.final_metrics.accuracy
                      << ", macro F1 " << result.final_metrics.macro_f1 << '\n';
        } else if (compare->parsed()) {
            std::vector<atsssf::StrategyKind> strategies;
            std::stringstream ss(strategies_arg);
            std::string name;
            while (std::getline(ss, name, ','))
                if (!name.empty()) strategies.push_back(atsssf::strategy_from_name(name));
            atsssf::compare_command(compare_flags.build(), strategies);
        } else if (exp->parsed()) {
            atsssf::export_dataset_command(export_flags.build());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
