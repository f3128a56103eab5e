#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "atsssf/dataset.hpp"
#include "atsssf/smoothing.hpp"
#include "atsssf/topsis.hpp"

namespace atsssf {

enum class StrategyKind { kFedAvgBaseline, kAtsssfStatic, kAtsssfAdaptive };

std::string strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(const std::string& name);

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t n_clients = 10;
    std::size_t rounds = 50;
    StrategyKind strategy = StrategyKind::kAtsssfAdaptive;
    double tau = 0.75;
    int max_omissions = 3;
    double alpha_init = 0.3;
    double sample_fraction = 1.0;
    double variance_threshold = 0.01;
    double alpha_floor = 0.05;
    CriteriaWeights weights;

    std::size_t n_per_class = 200;
    std::size_t bins = 32;
    double concentration = 1.0;  // <= 0 selects the IID partition
    double dataset_noise = 0.05;
    bool smote_enabled = true;
    std::size_t smote_k = 5;

    std::size_t adversary_count = 0;
    BehaviorKind adversary_behavior = BehaviorKind::kLabelFlip;
    double adversary_flip_fraction = 1.0;
    double adversary_noise_sigma = 0.5;

    std::vector<std::size_t> hidden_dims{64, 32, 16};
    double dropout = 0.2;
    double lr = 0.001;
    std::size_t batch_size = 16;
    int local_epochs = 1;
    std::size_t threads = 1;

    std::string out_dir = "out";

    /// Throws std::invalid_argument naming the offending key.
    void validate() const;
    SmootherState smoother() const;
};

/// One dotted key with its raw text value, e.g. {"dataset.bins", "32"}.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses "key = value" lines ('#' starts a comment). Unknown keys are
/// rejected. Overrides are applied after the file and win.
ExperimentConfig parse_config(const std::string& path, const ConfigOverrides& overrides = {});

/// Parses overrides against the defaults without reading a file.
ExperimentConfig config_from_overrides(const ConfigOverrides& overrides);

/// The config as "key = value" lines; parseable by parse_config, so every
/// report is self-describing.
std::string config_echo(const ExperimentConfig& config);

}  // namespace atsssf
