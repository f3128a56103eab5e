#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "atsssf/config.hpp"
#include "atsssf/dataset.hpp"
#include "atsssf/metrics.hpp"
#include "atsssf/model.hpp"
#include "atsssf/participation.hpp"
#include "atsssf/smoothing.hpp"
#include "atsssf/topsis.hpp"

namespace atsssf {

struct Strategy {
    StrategyKind kind = StrategyKind::kAtsssfAdaptive;
    double tau = 0.75;
    int max_omissions = 3;
    CriteriaWeights weights;
    SmootherState smoother;

    bool filters() const { return kind != StrategyKind::kFedAvgBaseline; }
};

/// Per-round record. Under fedavg_baseline no smoothing happens: alpha and
/// the smoothed-trust fields carry raw-score statistics or NaN markers, and
/// the active set is the whole cohort. Raw TOPSIS scores are still computed
/// and logged so the baseline's trust dispersion is observable.
struct RoundLog {
    std::size_t round = 0;  // 1-based
    StrategyKind strategy = StrategyKind::kFedAvgBaseline;
    double alpha = 0.0;     // NaN under fedavg_baseline
    double sigma2 = 0.0;    // population variance of the round's raw scores
    double mean_trust = 0.0;      // smoothed under atsssf, raw under fedavg
    double trust_variance = 0.0;  // same convention as mean_trust
    std::set<int> omitted_now;
    std::set<int> readmitted_now;
    std::size_t active_count = 0;
    MetricVector global;  // held-out test metrics of the new global model
};

struct ClientRoundLog {
    std::size_t round = 0;
    int client_id = 0;
    double raw_trust = 0.0;
    double smoothed_trust = 0.0;  // NaN under fedavg_baseline
    Participation status = Participation::kIncluded;
    std::string behavior;
};

/// Sample-count-weighted element-wise mean; weights are renormalized over
/// the included clients so they always sum to 1.
ModelParams fedavg_aggregate(const std::map<int, ModelParams>& updates,
                             const std::map<int, std::size_t>& sizes);

/// Everything the round loop needs; shards are immutable once built.
struct EngineSetup {
    std::vector<ClientShard> shards;
    LabeledData test_set;
    LayerLayout layout;
    std::uint64_t seed = 1;
    double lr = 0.001;
    std::size_t batch_size = 16;
    int local_epochs = 1;
    std::size_t threads = 1;
    double sample_fraction = 1.0;
};

class FederationEngine {
public:
    FederationEngine(EngineSetup setup, Strategy strategy);

    /// One communication round: broadcast, local training with behavior
    /// injection, harness-side validation metrics, trust pipeline,
    /// participation decision, trust-filtered aggregation, global eval.
    RoundLog run_round();

    /// Client rows produced by the most recent run_round call.
    const std::vector<ClientRoundLog>& last_client_rows() const { return client_rows_; }

    const ModelParams& global_params() const { return global_; }
    const StatusMap& statuses() const { return statuses_; }
    const SmoothedTrust& smoothed_trust_scores() const { return smoothed_; }
    const SmootherState& smoother() const { return strategy_.smoother; }
    std::size_t rounds_run() const { return round_; }
    std::vector<std::size_t> shard_train_sizes() const;
    MetricVector evaluate_global() const;
    ConfusionMatrix global_confusion() const;

private:
    EngineSetup setup_;
    Strategy strategy_;
    ModelParams global_;
    StatusMap statuses_;
    SmoothedTrust smoothed_;
    std::size_t round_ = 0;
    std::vector<ClientRoundLog> client_rows_;
};

struct ExperimentResult {
    std::vector<RoundLog> rounds;
    std::vector<ClientRoundLog> client_rounds;
    ModelParams final_params;
    MetricVector initial_metrics;  // untrained global model on the test set
    MetricVector final_metrics;
    ConfusionMatrix final_confusion;
    std::uint64_t data_hash = 0;
    std::vector<std::size_t> shard_train_sizes;
    std::vector<std::string> behaviors;  // by client id
};

/// Builds the dataset pipeline (generate, features, global 80/20 split,
/// standardize on train only, partition, behavior corruption, per-shard
/// SMOTE) and returns a ready engine plus the dataset hash.
std::pair<FederationEngine, std::uint64_t> build_engine(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace atsssf
