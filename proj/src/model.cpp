#include "atsssf/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace atsssf {

std::vector<std::size_t> LayerLayout::dims() const {
    std::vector<std::size_t> d;
    d.push_back(input_dim);
    d.insert(d.end(), hidden_dims.begin(), hidden_dims.end());
    d.push_back(output_dim);
    return d;
}

std::size_t LayerLayout::param_count() const {
    const auto d = dims();
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < d.size(); ++l) n += d[l] * d[l + 1] + d[l + 1];
    return n;
}

void LayerLayout::validate() const {
    if (input_dim < 1 || output_dim < 1)
        throw std::invalid_argument("LayerLayout: dims must be >= 1");
    for (std::size_t h : hidden_dims)
        if (h < 1) throw std::invalid_argument("LayerLayout: dims must be >= 1");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw std::invalid_argument("LayerLayout: dropout_rate must lie in [0,1)");
}

ModelParams init_model(const LayerLayout& layout, std::uint64_t seed) {
    layout.validate();
    ModelParams p;
    p.layout = layout;
    p.values.resize(layout.param_count());
    Rng rng(seed);
    const auto d = layout.dims();
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < d.size(); ++l) {
        const double bound = std::sqrt(6.0 / static_cast<double>(d[l] + d[l + 1]));
        for (std::size_t i = 0; i < d[l] * d[l + 1]; ++i)
            p.values[off + i] = rng.uniform(-bound, bound);
        off += d[l] * d[l + 1];
        for (std::size_t i = 0; i < d[l + 1]; ++i) p.values[off + i] = 0.0;
        off += d[l + 1];
    }
    return p;
}

namespace {

// Per-layer views into the flat vector: weight offset, bias offset, in, out.
struct LayerView {
    std::size_t w_off, b_off, in, out;
};

std::vector<LayerView> layer_views(const LayerLayout& layout) {
    const auto d = layout.dims();
    std::vector<LayerView> views;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < d.size(); ++l) {
        views.push_back({off, off + d[l] * d[l + 1], d[l], d[l + 1]});
        off += d[l] * d[l + 1] + d[l + 1];
    }
    return views;
}

// z = a * W + b for a batch of rows.
std::vector<std::vector<double>> affine(const std::vector<std::vector<double>>& a,
                                        const double* w, const double* b,
                                        std::size_t in, std::size_t out) {
    std::vector<std::vector<double>> z(a.size(), std::vector<double>(out));
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r].size() != in)
            throw std::invalid_argument("forward: feature width does not match layout");
        double* zr = z[r].data();
        for (std::size_t o = 0; o < out; ++o) zr[o] = b[o];
        const double* ar = a[r].data();
        for (std::size_t i = 0; i < in; ++i) {
            const double ai = ar[i];
            const double* wrow = w + i * out;
            for (std::size_t o = 0; o < out; ++o) zr[o] += ai * wrow[o];
        }
    }
    return z;
}

void softmax_rows(std::vector<std::vector<double>>& z) {
    for (auto& row : z) {
        const double mx = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (double& v : row) {
            v = std::exp(v - mx);
            sum += v;
        }
        for (double& v : row) v /= sum;
    }
}

struct ForwardCache {
    // activations[l] is the input to layer l; back() is the input to the
    // output layer. masks hold the inverted-dropout scale factors.
    std::vector<std::vector<std::vector<double>>> activations;
    std::vector<std::vector<std::vector<double>>> masks;
    std::vector<std::vector<double>> probs;
};

ForwardCache forward_cached(const ModelParams& params,
                            const std::vector<std::vector<double>>& batch,
                            bool train_mode, Rng* rng) {
    const auto views = layer_views(params.layout);
    const double p_drop = params.layout.dropout_rate;
    const bool dropout = train_mode && p_drop > 0.0;
    if (dropout && rng == nullptr)
        throw std::invalid_argument("forward: rng required for dropout in train mode");

    ForwardCache cache;
    cache.activations.push_back(batch);
    for (std::size_t l = 0; l + 1 < views.size(); ++l) {
        const auto& v = views[l];
        auto z = affine(cache.activations.back(), params.values.data() + v.w_off,
                        params.values.data() + v.b_off, v.in, v.out);
        for (auto& row : z)
            for (double& x : row) x = std::max(0.0, x);
        if (dropout) {
            const double scale = 1.0 / (1.0 - p_drop);
            std::vector<std::vector<double>> mask(z.size(), std::vector<double>(v.out));
            for (std::size_t r = 0; r < z.size(); ++r)
                for (std::size_t o = 0; o < v.out; ++o) {
                    mask[r][o] = (rng->uniform() < p_drop) ? 0.0 : scale;
                    z[r][o] *= mask[r][o];
                }
            cache.masks.push_back(std::move(mask));
        }
        cache.activations.push_back(std::move(z));
    }
    const auto& v = views.back();
    cache.probs = affine(cache.activations.back(), params.values.data() + v.w_off,
                         params.values.data() + v.b_off, v.in, v.out);
    softmax_rows(cache.probs);
    return cache;
}

}  // namespace

std::vector<std::vector<double>> forward(const ModelParams& params,
                                         const std::vector<std::vector<double>>& batch,
                                         bool train_mode, Rng* rng) {
    return forward_cached(params, batch, train_mode, rng).probs;
}

std::pair<double, std::vector<double>> loss_and_gradient(
    const ModelParams& params, const std::vector<std::vector<double>>& batch,
    const std::vector<int>& labels, const std::vector<double>& class_weights,
    Rng* rng) {
    if (batch.size() != labels.size())
        throw std::invalid_argument("loss_and_gradient: batch/labels length mismatch");
    if (class_weights.size() != params.layout.output_dim)
        throw std::invalid_argument("loss_and_gradient: class_weights length mismatch");
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("loss_and_gradient: empty batch");

    auto cache = forward_cached(params, batch, rng != nullptr, rng);
    const auto views = layer_views(params.layout);
    const std::size_t k = params.layout.output_dim;

    double loss = 0.0;
    // dZ for the output layer: cw[y] * (p - onehot(y)) / n per row.
    std::vector<std::vector<double>> dz = cache.probs;
    for (std::size_t r = 0; r < n; ++r) {
        const int y = labels[r];
        if (y < 0 || static_cast<std::size_t>(y) >= k)
            throw std::out_of_range("loss_and_gradient: label out of range");
        const double cw = class_weights[y];
        const double p = std::max(cache.probs[r][y], 1e-300);
        loss += cw * -std::log(p);
        for (std::size_t o = 0; o < k; ++o) {
            dz[r][o] = cw * dz[r][o] / static_cast<double>(n);
        }
        dz[r][y] -= cw / static_cast<double>(n);
    }
    loss /= static_cast<double>(n);
    if (!std::isfinite(loss))
        throw std::runtime_error("loss_and_gradient: non-finite loss");

    std::vector<double> grad(params.values.size(), 0.0);
    for (std::size_t li = views.size(); li-- > 0;) {
        const auto& v = views[li];
        const auto& a_in = cache.activations[li];
        // dW = a_in^T dz, db = column sums of dz.
        for (std::size_t r = 0; r < n; ++r) {
            const double* ar = a_in[r].data();
            const double* dzr = dz[r].data();
            for (std::size_t i = 0; i < v.in; ++i) {
                double* grow = grad.data() + v.w_off + i * v.out;
                const double ai = ar[i];
                for (std::size_t o = 0; o < v.out; ++o) grow[o] += ai * dzr[o];
            }
            double* gb = grad.data() + v.b_off;
            for (std::size_t o = 0; o < v.out; ++o) gb[o] += dzr[o];
        }
        if (li == 0) break;

        // dA for the previous layer, then back through dropout and ReLU.
        std::vector<std::vector<double>> da(n, std::vector<double>(v.in, 0.0));
        for (std::size_t r = 0; r < n; ++r) {
            const double* dzr = dz[r].data();
            double* dar = da[r].data();
            const double* w = params.values.data() + v.w_off;
            for (std::size_t i = 0; i < v.in; ++i) {
                const double* wrow = w + i * v.out;
                double acc = 0.0;
                for (std::size_t o = 0; o < v.out; ++o) acc += wrow[o] * dzr[o];
                dar[i] = acc;
            }
        }
        const bool dropped = !cache.masks.empty();
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t i = 0; i < v.in; ++i) {
                if (dropped) da[r][i] *= cache.masks[li - 1][r][i];
                // activations[li] is post-ReLU, post-mask; an exact zero
                // means the unit was gated by one of them.
                if (cache.activations[li][r][i] == 0.0) da[r][i] = 0.0;
            }
        }
        dz = std::move(da);
    }
    return {loss, std::move(grad)};
}

void adam_step(AdamState& state, ModelParams& params, const std::vector<double>& grad) {
    const std::size_t n = params.values.size();
    if (state.m.size() != n || state.v.size() != n || grad.size() != n)
        throw std::invalid_argument("adam_step: length mismatch");
    ++state.t;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < n; ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params.values[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

std::vector<double> class_weights_from_labels(const std::vector<int>& y, std::size_t k) {
    std::vector<long> counts(k, 0);
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= k)
            throw std::out_of_range("class_weights_from_labels: label out of range");
        ++counts[label];
    }
    std::vector<double> w(k, 1.0);
    double inv_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
            inv_sum += 1.0 / static_cast<double>(counts[c]);
            ++present;
        }
    }
    if (present == 0) return w;
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] > 0)
            w[c] = (1.0 / static_cast<double>(counts[c])) * static_cast<double>(present) / inv_sum;
    return w;
}

ModelParams train_local(const ModelParams& params, const LabeledData& data, int epochs,
                        std::size_t batch_size, double lr, Rng& rng) {
    if (data.empty()) throw std::invalid_argument("train_local: empty shard");
    if (batch_size == 0) throw std::invalid_argument("train_local: batch_size must be >= 1");

    ModelParams p = params;
    AdamState adam(p.values.size(), lr);
    const auto weights = class_weights_from_labels(data.y, p.layout.output_dim);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    for (int e = 0; e < epochs; ++e) {
        // Fisher-Yates with the caller's rng; the rng also drives dropout.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            std::vector<std::vector<double>> bx;
            std::vector<int> by;
            bx.reserve(end - start);
            by.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                bx.push_back(data.x[order[i]]);
                by.push_back(data.y[order[i]]);
            }
            auto [loss, grad] = loss_and_gradient(p, bx, by, weights, &rng);
            adam_step(adam, p, grad);
        }
    }
    return p;
}

MetricVector evaluate_model(const ModelParams& params, const LabeledData& data) {
    const auto probs = forward(params, data.x, false, nullptr);
    std::vector<int> preds(probs.size());
    for (std::size_t r = 0; r < probs.size(); ++r) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < probs[r].size(); ++c)
            if (probs[r][c] > probs[r][best]) best = c;
        preds[r] = static_cast<int>(best);
    }
    const auto cm = confusion_matrix(preds, data.y, params.layout.output_dim);
    return macro_metrics(cm);
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    const auto d = params.layout.dims();
    auto put_u32 = [&out](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u32(static_cast<std::uint32_t>(d.size()));
    for (std::size_t dim : d) put_u32(static_cast<std::uint32_t>(dim));
    for (double v : params.values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
        out.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    auto get_u32 = [&in]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (!in) throw std::runtime_error("load_checkpoint: truncated header");
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    const std::uint32_t n_dims = get_u32();
    if (n_dims < 2) throw std::runtime_error("load_checkpoint: bad dim count");
    std::vector<std::size_t> d(n_dims);
    for (auto& dim : d) dim = get_u32();

    ModelParams p;
    p.layout.input_dim = d.front();
    p.layout.output_dim = d.back();
    p.layout.hidden_dims.assign(d.begin() + 1, d.end() - 1);
    p.values.resize(p.layout.param_count());
    for (double& v : p.values) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        if (!in) throw std::runtime_error("load_checkpoint: truncated parameters");
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        std::memcpy(&v, &bits, sizeof(v));
    }
    return p;
}

}  // namespace atsssf
