#include "atsssf/commands.hpp"

#include <filesystem>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "atsssf/report.hpp"

namespace atsssf {

std::string round_log_path(const std::string& out_dir, StrategyKind strategy) {
    return out_dir + "/round_log_" + strategy_name(strategy) + ".csv";
}

std::string client_log_path(const std::string& out_dir, StrategyKind strategy) {
    return out_dir + "/client_log_" + strategy_name(strategy) + ".csv";
}

std::string report_path(const std::string& out_dir, StrategyKind strategy) {
    return out_dir + "/report_" + strategy_name(strategy) + ".json";
}

ExperimentResult run_command(const ExperimentConfig& config, bool write_checkpoint) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);

    ExperimentResult result = run_experiment(config);
    write_file_atomic(round_log_path(config.out_dir, config.strategy),
                      round_log_csv(result.rounds));
    write_file_atomic(client_log_path(config.out_dir, config.strategy),
                      client_log_csv(result.client_rounds));
    write_file_atomic(report_path(config.out_dir, config.strategy),
                      report_json(config, result));
    if (write_checkpoint)
        save_checkpoint(result.final_params,
                        config.out_dir + "/model_" + strategy_name(config.strategy) + ".bin");
    return result;
}

void compare_command(const ExperimentConfig& base,
                     const std::vector<StrategyKind>& strategies) {
    if (strategies.size() < 2)
        throw std::invalid_argument("compare: need at least two strategies");
    std::filesystem::create_directories(base.out_dir);

    std::vector<ExperimentResult> results;
    results.reserve(strategies.size());
    for (StrategyKind s : strategies) {
        ExperimentConfig config = base;
        config.strategy = s;
        results.push_back(run_command(config));
        if (results.back().data_hash != results.front().data_hash)
            throw std::runtime_error("compare: dataset hash mismatch between strategies");
    }

    std::vector<std::pair<std::string, const ExperimentResult*>> named;
    for (std::size_t i = 0; i < strategies.size(); ++i)
        named.emplace_back(strategy_name(strategies[i]), &results[i]);
    const std::string summary = comparison_summary_csv(named);
    write_file_atomic(base.out_dir + "/summary.csv", summary);
    std::cout << summary;

    std::vector<PlotSeries> trust, omissions, accuracy;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const std::string name = strategy_name(strategies[i]);
        PlotSeries mean{name + " mean", {}, false};
        PlotSeries var{name + " variance", {}, true};
        PlotSeries om{name, {}, false};
        PlotSeries acc{name, {}, false};
        for (const auto& r : results[i].rounds) {
            mean.ys.push_back(r.mean_trust);
            var.ys.push_back(r.trust_variance);
            om.ys.push_back(static_cast<double>(r.omitted_now.size()));
            acc.ys.push_back(r.global.accuracy);
        }
        trust.push_back(std::move(mean));
        trust.push_back(std::move(var));
        omissions.push_back(std::move(om));
        accuracy.push_back(std::move(acc));
    }
    write_file_atomic(base.out_dir + "/trust.svg",
                      line_plot_svg("Trust score mean and variance per round", "trust", trust));
    write_file_atomic(base.out_dir + "/omissions.svg",
                      line_plot_svg("Omitted clients per round", "omitted clients", omissions));
    write_file_atomic(base.out_dir + "/accuracy.svg",
                      line_plot_svg("Global test accuracy per round", "accuracy", accuracy));
}

void export_dataset_command(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    Rng rng = derive_rng(config.seed, {fnv1a("dataset")});
    const auto samples =
        generate_dataset(config.n_per_class, config.bins, config.dataset_noise, rng);
    export_dataset_csv(samples, config.out_dir + "/dataset.csv");
}

}  // namespace atsssf
