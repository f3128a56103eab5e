#include "atsssf/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace atsssf {

std::string strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::kFedAvgBaseline: return "fedavg_baseline";
        case StrategyKind::kAtsssfStatic: return "atsssf_static";
        case StrategyKind::kAtsssfAdaptive: return "atsssf_adaptive";
    }
    return "unknown";
}

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "fedavg_baseline") return StrategyKind::kFedAvgBaseline;
    if (name == "atsssf_static") return StrategyKind::kAtsssfStatic;
    if (name == "atsssf_adaptive") return StrategyKind::kAtsssfAdaptive;
    throw std::invalid_argument("strategy: unknown value '" + name +
                                "' (expected fedavg_baseline, atsssf_static, atsssf_adaptive)");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument(key + ": " + why);
    };
    if (n_clients < 1) fail("clients", "must be >= 1");
    if (!(tau >= 0.0 && tau < 1.0)) fail("tau", "must lie in [0,1)");
    if (max_omissions < 0) fail("max_omissions", "must be >= 0");
    if (!(alpha_init > 0.0 && alpha_init <= 1.0)) fail("alpha", "must lie in (0,1]");
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
        fail("sample_fraction", "must lie in (0,1]");
    if (variance_threshold < 0.0) fail("smoothing.variance_threshold", "must be >= 0");
    if (!(alpha_floor > 0.0 && alpha_floor <= alpha_init))
        fail("smoothing.alpha_floor", "must lie in (0, alpha]");
    try {
        weights.validate();
    } catch (const std::exception& e) {
        fail("weights", e.what());
    }
    if (n_per_class < 1) fail("dataset.per_class", "must be >= 1");
    if (bins < 2) fail("dataset.bins", "must be >= 2");
    if (dataset_noise < 0.0) fail("dataset.noise", "must be >= 0");
    if (smote_k < 1) fail("dataset.smote_k", "must be >= 1");
    if (adversary_count > n_clients) fail("adversaries.count", "exceeds client count");
    if (adversary_behavior == BehaviorKind::kHonest)
        fail("adversaries.behavior", "must be label_flip or noisy_update");
    if (!(adversary_flip_fraction >= 0.0 && adversary_flip_fraction <= 1.0))
        fail("adversaries.flip_fraction", "must lie in [0,1]");
    if (adversary_noise_sigma < 0.0) fail("adversaries.noise_sigma", "must be >= 0");
    if (hidden_dims.empty()) fail("model.hidden", "needs at least one width");
    for (std::size_t h : hidden_dims)
        if (h < 1) fail("model.hidden", "widths must be >= 1");
    if (!(dropout >= 0.0 && dropout < 1.0)) fail("model.dropout", "must lie in [0,1)");
    if (!(lr > 0.0)) fail("train.lr", "must be > 0");
    if (batch_size < 1) fail("train.batch_size", "must be >= 1");
    if (local_epochs < 0) fail("train.epochs", "must be >= 0");
    if (threads < 1) fail("train.threads", "must be >= 1");
    if (out_dir.empty()) fail("out", "must not be empty");
}

SmootherState ExperimentConfig::smoother() const {
    SmootherState s;
    s.alpha = alpha_init;
    s.mode = (strategy == StrategyKind::kAtsssfAdaptive) ? SmootherMode::kAdaptive
                                                         : SmootherMode::kStatic;
    s.variance_threshold = variance_threshold;
    s.alpha_floor = alpha_floor;
    return s;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not an integer: '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw std::invalid_argument(key + ": not a boolean: '" + value + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_double(key, trim(cell)));
    return out;
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "clients") {
        c.n_clients = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "rounds") {
        c.rounds = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "strategy") {
        c.strategy = strategy_from_name(value);
    } else if (key == "tau") {
        c.tau = parse_double(key, value);
    } else if (key == "max_omissions") {
        c.max_omissions = static_cast<int>(parse_int(key, value));
    } else if (key == "alpha") {
        c.alpha_init = parse_double(key, value);
    } else if (key == "sample_fraction") {
        c.sample_fraction = parse_double(key, value);
    } else if (key == "smoothing.variance_threshold") {
        c.variance_threshold = parse_double(key, value);
    } else if (key == "smoothing.alpha_floor") {
        c.alpha_floor = parse_double(key, value);
    } else if (key == "weights") {
        const auto w = parse_double_list(key, value);
        if (w.size() != kCriteria)
            throw std::invalid_argument("weights: expected 4 comma-separated values");
        for (std::size_t j = 0; j < kCriteria; ++j) c.weights.w[j] = w[j];
    } else if (key == "dataset.per_class") {
        c.n_per_class = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "dataset.bins") {
        c.bins = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "dataset.concentration") {
        c.concentration = (value == "iid") ? 0.0 : parse_double(key, value);
        if (value != "iid" && c.concentration <= 0.0)
            throw std::invalid_argument("dataset.concentration: must be > 0 or 'iid'");
    } else if (key == "dataset.noise") {
        c.dataset_noise = parse_double(key, value);
    } else if (key == "dataset.smote") {
        c.smote_enabled = parse_bool(key, value);
    } else if (key == "dataset.smote_k") {
        c.smote_k = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "adversaries.count") {
        c.adversary_count = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "adversaries.behavior") {
        if (value == "label_flip")
            c.adversary_behavior = BehaviorKind::kLabelFlip;
        else if (value == "noisy_update")
            c.adversary_behavior = BehaviorKind::kNoisyUpdate;
        else
            throw std::invalid_argument(
                "adversaries.behavior: expected label_flip or noisy_update, got '" + value + "'");
    } else if (key == "adversaries.flip_fraction") {
        c.adversary_flip_fraction = parse_double(key, value);
    } else if (key == "adversaries.noise_sigma") {
        c.adversary_noise_sigma = parse_double(key, value);
    } else if (key == "model.hidden") {
        const auto dims = parse_double_list(key, value);
        c.hidden_dims.clear();
        for (double d : dims) {
            if (d < 1.0 || d != std::floor(d))
                throw std::invalid_argument("model.hidden: widths must be positive integers");
            c.hidden_dims.push_back(static_cast<std::size_t>(d));
        }
    } else if (key == "model.dropout") {
        c.dropout = parse_double(key, value);
    } else if (key == "train.lr") {
        c.lr = parse_double(key, value);
    } else if (key == "train.batch_size") {
        c.batch_size = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "train.epochs") {
        c.local_epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "train.threads") {
        c.threads = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "out") {
        c.out_dir = value;
    } else {
        throw std::invalid_argument("unknown configuration key: '" + key + "'");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_config: cannot open " + path);
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
        apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    for (const auto& [key, value] : overrides) apply_key(config, key, value);
    config.validate();
    return config;
}

ExperimentConfig config_from_overrides(const ConfigOverrides& overrides) {
    ExperimentConfig config;
    for (const auto& [key, value] : overrides) apply_key(config, key, value);
    config.validate();
    return config;
}

std::string config_echo(const ExperimentConfig& c) {
    std::ostringstream out;
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return std::string(buf);
    };
    out << "seed = " << c.seed << '\n';
    out << "clients = " << c.n_clients << '\n';
    out << "rounds = " << c.rounds << '\n';
    out << "strategy = " << strategy_name(c.strategy) << '\n';
    out << "tau = " << num(c.tau) << '\n';
    out << "max_omissions = " << c.max_omissions << '\n';
    out << "alpha = " << num(c.alpha_init) << '\n';
    out << "sample_fraction = " << num(c.sample_fraction) << '\n';
    out << "smoothing.variance_threshold = " << num(c.variance_threshold) << '\n';
    out << "smoothing.alpha_floor = " << num(c.alpha_floor) << '\n';
    out << "weights = " << num(c.weights.w[0]) << ',' << num(c.weights.w[1]) << ','
        << num(c.weights.w[2]) << ',' << num(c.weights.w[3]) << '\n';
    out << "dataset.per_class = " << c.n_per_class << '\n';
    out << "dataset.bins = " << c.bins << '\n';
    if (c.concentration <= 0.0)
        out << "dataset.concentration = iid\n";
    else
        out << "dataset.concentration = " << num(c.concentration) << '\n';
    out << "dataset.noise = " << num(c.dataset_noise) << '\n';
    out << "dataset.smote = " << (c.smote_enabled ? "true" : "false") << '\n';
    out << "dataset.smote_k = " << c.smote_k << '\n';
    out << "adversaries.count = " << c.adversary_count << '\n';
    out << "adversaries.behavior = "
        << (c.adversary_behavior == BehaviorKind::kNoisyUpdate ? "noisy_update" : "label_flip")
        << '\n';
    out << "adversaries.flip_fraction = " << num(c.adversary_flip_fraction) << '\n';
    out << "adversaries.noise_sigma = " << num(c.adversary_noise_sigma) << '\n';
    out << "model.hidden = ";
    for (std::size_t i = 0; i < c.hidden_dims.size(); ++i)
        out << (i ? "," : "") << c.hidden_dims[i];
    out << '\n';
    out << "model.dropout = " << num(c.dropout) << '\n';
    out << "train.lr = " << num(c.lr) << '\n';
    out << "train.batch_size = " << c.batch_size << '\n';
    out << "train.epochs = " << c.local_epochs << '\n';
    out << "train.threads = " << c.threads << '\n';
    out << "out = " << c.out_dir << '\n';
    return out.str();
}

}  // namespace atsssf
