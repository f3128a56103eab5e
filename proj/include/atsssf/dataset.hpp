#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "atsssf/data.hpp"
#include "atsssf/rng.hpp"

namespace atsssf {

inline constexpr std::size_t kNumClasses = 7;

/// One spectral acquisition: reflection (s11) and transmission (s21)
/// magnitudes over F frequency bins, labeled with a healing stage 0..6.
struct SpectralSample {
    std::vector<double> s11;
    std::vector<double> s21;
    int label = 0;
};

enum class BehaviorKind { kHonest, kLabelFlip, kNoisyUpdate };

struct Behavior {
    BehaviorKind kind = BehaviorKind::kHonest;
    double flip_fraction = 1.0;  // label_flip: fraction of train labels flipped
    double noise_sigma = 0.5;    // noisy_update: per-coordinate sigma at update time

    std::string name() const;
};

struct ClientShard {
    int client_id = 0;
    LabeledData train;
    LabeledData validation;
    Behavior behavior;
};

/// Balanced synthetic set: per class, s21 is a resonance bump whose center
/// and amplitude shift monotonically with the stage, s11 the complementary
/// dip, both with additive Gaussian noise. Adjacent stages overlap more
/// than distant ones.
std::vector<SpectralSample> generate_dataset(std::size_t n_per_class, std::size_t bins,
                                             double noise_sigma, Rng& rng);

/// Concatenates s11, s21, s11-s21, guarded s11/s21, and the first
/// differences of s11 and s21: 6F-2 values.
std::vector<double> derive_features(const SpectralSample& s);

struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;  // zero stds are stored as 1

    std::vector<double> apply(const std::vector<double>& x) const;
    void apply_in_place(LabeledData& data) const;
};

Standardizer fit_standardizer(const LabeledData& train);

struct SmoteResult {
    LabeledData data;
    /// For each synthetic sample appended after the originals: the indices
    /// (into data.x) of its two parents.
    std::vector<std::pair<std::size_t, std::size_t>> parents;
};

/// Upsamples every minority class to the majority count. Each synthetic
/// point lies on the segment between a minority sample and one of its
/// k nearest same-class neighbors; a single-sample class is duplicated
/// with sigma=1e-6 jitter.
SmoteResult smote(const LabeledData& train, std::size_t k, std::size_t num_classes, Rng& rng);

/// Symmetric-Dirichlet label-skewed partition. concentration <= 0 selects
/// the IID mode (per-class round robin). Every client ends with at least
/// min_shard samples, rebalanced from the largest shards. The per-shard
/// 80/20 train/validation split happens here.
std::vector<ClientShard> partition(const LabeledData& data, std::size_t n_clients,
                                   double concentration, std::size_t min_shard, Rng& rng);

/// Applies the shard's behavior to its training labels. label_flip replaces
/// exactly round(f*n) labels (chosen without replacement) with a uniformly
/// random different label. noisy_update is applied by the round engine at
/// update time, not here.
ClientShard corrupt_shard(const ClientShard& shard, Rng& rng);

/// FNV-1a over the raw sample bytes; identifies a generated dataset in
/// reports so multi-strategy comparisons can prove they shared data.
std::uint64_t dataset_hash(const std::vector<SpectralSample>& samples);

/// One row per sample: F s11 bins, F s21 bins, label.
void export_dataset_csv(const std::vector<SpectralSample>& samples, const std::string& path);
std::vector<SpectralSample> import_dataset_csv(const std::string& path);

}  // namespace atsssf
