#include "atsssf/federation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace atsssf {

namespace {

constexpr std::uint64_t kTagDataset = fnv1a("dataset");
constexpr std::uint64_t kTagSplit = fnv1a("split");
constexpr std::uint64_t kTagPartition = fnv1a("partition");
constexpr std::uint64_t kTagFlip = fnv1a("flip");
constexpr std::uint64_t kTagSmote = fnv1a("smote");
constexpr std::uint64_t kTagInit = fnv1a("init");
constexpr std::uint64_t kTagTrain = fnv1a("train");
constexpr std::uint64_t kTagNoise = fnv1a("noise");
constexpr std::uint64_t kTagSelect = fnv1a("select");

}  // namespace

ModelParams fedavg_aggregate(const std::map<int, ModelParams>& updates,
                             const std::map<int, std::size_t>& sizes) {
    if (updates.empty())
        throw std::invalid_argument("fedavg_aggregate: no updates to aggregate");

    double total = 0.0;
    for (const auto& [id, params] : updates) {
        auto it = sizes.find(id);
        if (it == sizes.end())
            throw std::invalid_argument("fedavg_aggregate: missing size for client " +
                                        std::to_string(id));
        total += static_cast<double>(it->second);
    }
    if (total <= 0.0) throw std::invalid_argument("fedavg_aggregate: zero total sample count");

    ModelParams out = updates.begin()->second;
    std::fill(out.values.begin(), out.values.end(), 0.0);
    for (const auto& [id, params] : updates) {
        if (params.values.size() != out.values.size())
            throw std::invalid_argument("fedavg_aggregate: parameter length mismatch");
        const double w = static_cast<double>(sizes.at(id)) / total;
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += w * params.values[i];
    }
    return out;
}

FederationEngine::FederationEngine(EngineSetup setup, Strategy strategy)
    : setup_(std::move(setup)), strategy_(strategy) {
    if (setup_.shards.empty()) throw std::invalid_argument("FederationEngine: no shards");
    strategy_.weights.validate();
    strategy_.smoother.validate();

    std::vector<int> ids;
    for (const auto& shard : setup_.shards) {
        ids.push_back(shard.client_id);
        if (shard.train.empty())
            throw std::invalid_argument("FederationEngine: client " +
                                        std::to_string(shard.client_id) +
                                        " has an empty training shard");
        if (shard.validation.empty())
            throw std::invalid_argument("FederationEngine: client " +
                                        std::to_string(shard.client_id) +
                                        " has an empty validation shard");
    }
    statuses_ = register_clients(ids);
    for (int id : ids) smoothed_[id] = 1.0;
    global_ = init_model(setup_.layout, derive(setup_.seed, {kTagInit}));
}

std::vector<std::size_t> FederationEngine::shard_train_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(setup_.shards.size());
    for (const auto& shard : setup_.shards) sizes.push_back(shard.train.size());
    return sizes;
}

MetricVector FederationEngine::evaluate_global() const {
    return evaluate_model(global_, setup_.test_set);
}

ConfusionMatrix FederationEngine::global_confusion() const {
    const auto probs = forward(global_, setup_.test_set.x, false, nullptr);
    std::vector<int> preds(probs.size());
    for (std::size_t r = 0; r < probs.size(); ++r) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < probs[r].size(); ++c)
            if (probs[r][c] > probs[r][best]) best = c;
        preds[r] = static_cast<int>(best);
    }
    return confusion_matrix(preds, setup_.test_set.y, setup_.layout.output_dim);
}

RoundLog FederationEngine::run_round() {
    const std::size_t t = ++round_;
    const std::size_t n = setup_.shards.size();

    // Client selection: full participation unless a sampling fraction is set.
    std::vector<std::size_t> selected(n);
    std::iota(selected.begin(), selected.end(), 0);
    if (setup_.sample_fraction < 1.0) {
        const std::size_t keep = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::lround(setup_.sample_fraction * static_cast<double>(n))));
        Rng rng = derive_rng(setup_.seed, {kTagSelect, t});
        for (std::size_t j = 0; j < keep; ++j)
            std::swap(selected[j], selected[j + rng.uniform_index(n - j)]);
        selected.resize(keep);
        std::sort(selected.begin(), selected.end());
    }

    // Local training and harness-side validation metrics. Each client task
    // owns rng substreams derived from (seed, round, client id), so the
    // parallel and serial schedules produce identical bits.
    std::vector<ModelParams> updated(selected.size());
    std::vector<MetricVector> metrics(selected.size());
    auto client_task = [&](std::size_t slot) {
        const auto& shard = setup_.shards[selected[slot]];
        const std::uint64_t cid = static_cast<std::uint64_t>(shard.client_id);
        Rng train_rng = derive_rng(setup_.seed, {kTagTrain, t, cid});
        ModelParams params = train_local(global_, shard.train, setup_.local_epochs,
                                         setup_.batch_size, setup_.lr, train_rng);
        if (shard.behavior.kind == BehaviorKind::kNoisyUpdate) {
            Rng noise_rng = derive_rng(setup_.seed, {kTagNoise, t, cid});
            for (double& v : params.values)
                v += noise_rng.gaussian(0.0, shard.behavior.noise_sigma);
        }
        metrics[slot] = evaluate_model(params, shard.validation);
        updated[slot] = std::move(params);
    };
    const std::size_t workers = std::min(setup_.threads, selected.size());
    if (workers <= 1) {
        for (std::size_t slot = 0; slot < selected.size(); ++slot) client_task(slot);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t slot = w; slot < selected.size(); slot += workers)
                    client_task(slot);
            });
        for (auto& th : pool) th.join();
    }

    DecisionMatrix d;
    for (std::size_t slot = 0; slot < selected.size(); ++slot)
        d.add_row(setup_.shards[selected[slot]].client_id, metrics[slot]);

    // Raw scores are computed for every strategy; the baseline logs them
    // without acting on them.
    const TrustScores raw = topsis_scores(d, strategy_.weights);
    const double sigma2 = trust_variance(raw);

    RoundLog log;
    log.round = t;
    log.strategy = strategy_.kind;
    log.sigma2 = sigma2;

    std::set<int> active_ids;
    if (strategy_.filters()) {
        strategy_.smoother = adapt_alpha(strategy_.smoother, sigma2);
        log.alpha = strategy_.smoother.alpha;
        smoothed_ = ema_update(smoothed_, raw, strategy_.smoother.alpha);

        // Decide over the selected cohort only; unselected clients keep
        // their status and counters untouched.
        StatusMap selected_statuses;
        for (std::size_t slot : selected) {
            const int id = setup_.shards[slot].client_id;
            selected_statuses.emplace(id, statuses_.at(id));
        }
        const RoundDecision decision =
            decide_round(selected_statuses, smoothed_, strategy_.tau, strategy_.max_omissions);
        for (const auto& [id, st] : selected_statuses) statuses_.at(id) = st;
        log.omitted_now = decision.omitted_now;
        log.readmitted_now = decision.readmitted_now;
        active_ids = decision.active_set;

        double mean = 0.0;
        for (const auto& [id, v] : smoothed_) mean += v;
        mean /= static_cast<double>(smoothed_.size());
        double var = 0.0;
        for (const auto& [id, v] : smoothed_) var += (v - mean) * (v - mean);
        log.mean_trust = mean;
        log.trust_variance = var / static_cast<double>(smoothed_.size());
    } else {
        log.alpha = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t slot : selected) active_ids.insert(setup_.shards[slot].client_id);
        log.mean_trust = 0.0;
        for (const auto& [id, v] : raw) log.mean_trust += v;
        log.mean_trust /= static_cast<double>(raw.size());
        log.trust_variance = sigma2;
    }

    std::map<int, ModelParams> updates;
    std::map<int, std::size_t> sizes;
    for (std::size_t slot = 0; slot < selected.size(); ++slot) {
        const int id = setup_.shards[selected[slot]].client_id;
        if (active_ids.count(id) > 0) {
            updates.emplace(id, std::move(updated[slot]));
            sizes.emplace(id, setup_.shards[selected[slot]].train.size());
        }
    }
    global_ = fedavg_aggregate(updates, sizes);
    log.active_count = active_ids.size();
    log.global = evaluate_global();

    client_rows_.clear();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t slot = 0; slot < selected.size(); ++slot) {
        const auto& shard = setup_.shards[selected[slot]];
        ClientRoundLog row;
        row.round = t;
        row.client_id = shard.client_id;
        row.raw_trust = raw.at(shard.client_id);
        row.smoothed_trust = strategy_.filters() ? smoothed_.at(shard.client_id) : nan;
        row.status = strategy_.filters() ? statuses_.at(shard.client_id).status
                                         : Participation::kIncluded;
        row.behavior = shard.behavior.name();
        client_rows_.push_back(std::move(row));
    }
    return log;
}

std::pair<FederationEngine, std::uint64_t> build_engine(const ExperimentConfig& config) {
    config.validate();

    Rng data_rng = derive_rng(config.seed, {kTagDataset});
    const auto samples =
        generate_dataset(config.n_per_class, config.bins, config.dataset_noise, data_rng);
    const std::uint64_t hash = dataset_hash(samples);

    LabeledData all;
    for (const auto& s : samples) all.push_back(derive_features(s), s.label);

    // Global stratified 80/20 split; the test set never sees SMOTE or
    // behavior corruption.
    Rng split_rng = derive_rng(config.seed, {kTagSplit});
    LabeledData train_pool, test_set;
    std::vector<std::vector<std::size_t>> by_class(kNumClasses);
    for (std::size_t i = 0; i < all.size(); ++i) by_class[all.y[i]].push_back(i);
    for (auto& idx : by_class) {
        for (std::size_t j = idx.size(); j > 1; --j)
            std::swap(idx[j - 1], idx[split_rng.uniform_index(j)]);
        const std::size_t n_test =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(
                                         0.2 * static_cast<double>(idx.size()))));
        for (std::size_t j = 0; j < idx.size(); ++j) {
            auto& dest = (j < n_test) ? test_set : train_pool;
            dest.push_back(all.x[idx[j]], all.y[idx[j]]);
        }
    }

    if (train_pool.size() < 2 * config.n_clients)
        throw std::invalid_argument(
            "dataset.per_class: training pool too small for clients (need at least 2 "
            "samples per client)");

    const Standardizer standardizer = fit_standardizer(train_pool);
    standardizer.apply_in_place(train_pool);
    standardizer.apply_in_place(test_set);

    Rng part_rng = derive_rng(config.seed, {kTagPartition});
    auto shards = partition(train_pool, config.n_clients, config.concentration, 2, part_rng);

    // Adversaries occupy the lowest client ids.
    for (auto& shard : shards) {
        if (static_cast<std::size_t>(shard.client_id) < config.adversary_count) {
            shard.behavior.kind = config.adversary_behavior;
            shard.behavior.flip_fraction = config.adversary_flip_fraction;
            shard.behavior.noise_sigma = config.adversary_noise_sigma;
        }
        if (shard.behavior.kind == BehaviorKind::kLabelFlip) {
            Rng flip_rng = derive_rng(
                config.seed, {kTagFlip, static_cast<std::uint64_t>(shard.client_id)});
            shard = corrupt_shard(shard, flip_rng);
        }
        if (config.smote_enabled) {
            Rng smote_rng = derive_rng(
                config.seed, {kTagSmote, static_cast<std::uint64_t>(shard.client_id)});
            shard.train =
                smote(shard.train, config.smote_k, kNumClasses, smote_rng).data;
        }
    }

    EngineSetup setup;
    setup.shards = std::move(shards);
    setup.test_set = std::move(test_set);
    setup.layout.input_dim = 6 * config.bins - 2;
    setup.layout.hidden_dims = config.hidden_dims;
    setup.layout.output_dim = kNumClasses;
    setup.layout.dropout_rate = config.dropout;
    setup.seed = config.seed;
    setup.lr = config.lr;
    setup.batch_size = config.batch_size;
    setup.local_epochs = config.local_epochs;
    setup.threads = config.threads;
    setup.sample_fraction = config.sample_fraction;

    Strategy strategy;
    strategy.kind = config.strategy;
    strategy.tau = config.tau;
    strategy.max_omissions = config.max_omissions;
    strategy.weights = config.weights;
    strategy.smoother = config.smoother();

    return {FederationEngine(std::move(setup), strategy), hash};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    auto [engine, hash] = build_engine(config);

    ExperimentResult result;
    result.data_hash = hash;
    result.initial_metrics = engine.evaluate_global();
    result.shard_train_sizes = engine.shard_train_sizes();
    result.behaviors.resize(config.n_clients);
    for (std::size_t i = 0; i < config.n_clients; ++i)
        result.behaviors[i] =
            (i < config.adversary_count)
                ? Behavior{config.adversary_behavior, config.adversary_flip_fraction,
                           config.adversary_noise_sigma}
                      .name()
                : Behavior{}.name();

    for (std::size_t t = 0; t < config.rounds; ++t) {
        result.rounds.push_back(engine.run_round());
        const auto& rows = engine.last_client_rows();
        result.client_rounds.insert(result.client_rounds.end(), rows.begin(), rows.end());
    }

    result.final_params = engine.global_params();
    result.final_metrics =
        result.rounds.empty() ? result.initial_metrics : result.rounds.back().global;
    result.final_confusion = engine.global_confusion();
    return result;
}

}  // namespace atsssf
