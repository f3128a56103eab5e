#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "atsssf/data.hpp"
#include "atsssf/metrics.hpp"
#include "atsssf/rng.hpp"

namespace atsssf {

struct LayerLayout {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_dims{64, 32, 16};
    std::size_t output_dim = 7;
    double dropout_rate = 0.2;

    /// Sequence of layer widths: input, hidden..., output.
    std::vector<std::size_t> dims() const;
    std::size_t param_count() const;
    void validate() const;
};

/// Flat weight+bias vector over the layout. Per layer: weights in row-major
/// order (in x out), then the out biases.
struct ModelParams {
    std::vector<double> values;
    LayerLayout layout;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n = 0, double lr_ = 0.001)
        : m(n, 0.0), v(n, 0.0), lr(lr_) {}
};

/// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
ModelParams init_model(const LayerLayout& layout, std::uint64_t seed);

/// Class probabilities, one row per batch sample. Hidden layers are
/// affine -> ReLU -> inverted dropout (train mode only); the output layer
/// is affine -> softmax. rng is required iff train_mode with dropout > 0.
std::vector<std::vector<double>> forward(const ModelParams& params,
                                         const std::vector<std::vector<double>>& batch,
                                         bool train_mode = false, Rng* rng = nullptr);

/// Mean class-weighted cross entropy and its gradient over the flat layout.
/// Dropout is active iff rng is non-null.
std::pair<double, std::vector<double>> loss_and_gradient(
    const ModelParams& params, const std::vector<std::vector<double>>& batch,
    const std::vector<int>& labels, const std::vector<double>& class_weights,
    Rng* rng = nullptr);

/// Bias-corrected Adam update; increments state.t in place.
void adam_step(AdamState& state, ModelParams& params, const std::vector<double>& grad);

/// Shuffled mini-batch training with Adam. Class weights are derived from
/// the shard label frequencies (inverse frequency, normalized to mean 1).
ModelParams train_local(const ModelParams& params, const LabeledData& data, int epochs,
                        std::size_t batch_size, double lr, Rng& rng);

/// Inverse-frequency class weights, mean 1 over classes present in y;
/// absent classes get weight 1 (they never contribute to the loss).
std::vector<double> class_weights_from_labels(const std::vector<int>& y, std::size_t k);

/// Forward in eval mode, argmax (ties to the lowest index), then macro
/// metrics against the labels.
MetricVector evaluate_model(const ModelParams& params, const LabeledData& data);

/// Binary checkpoint: u32 dim count, the dims as u32, then the flat
/// parameter vector as little-endian 64-bit floats.
void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace atsssf
