#include "atsssf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace atsssf {

std::string Behavior::name() const {
    switch (kind) {
        case BehaviorKind::kHonest: return "honest";
        case BehaviorKind::kLabelFlip: return "label_flip";
        case BehaviorKind::kNoisyUpdate: return "noisy_update";
    }
    return "unknown";
}

std::vector<SpectralSample> generate_dataset(std::size_t n_per_class, std::size_t bins,
                                             double noise_sigma, Rng& rng) {
    if (n_per_class < 1) throw std::invalid_argument("generate_dataset: n_per_class must be >= 1");
    if (bins < 2) throw std::invalid_argument("generate_dataset: bins must be >= 2");

    // Resonance center sweeps 0.2..0.8 of the band as healing progresses;
    // the per-sample center jitter is what makes adjacent stages overlap.
    const double width = 0.12;
    const double center_jitter = 0.05;
    const double amp_jitter = 0.03;

    std::vector<SpectralSample> samples;
    samples.reserve(n_per_class * kNumClasses);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const double center_c = 0.2 + 0.6 * static_cast<double>(c) / 6.0;
        const double amp_c = 0.55 + 0.05 * static_cast<double>(c);
        for (std::size_t s = 0; s < n_per_class; ++s) {
            const double center = rng.gaussian(center_c, center_jitter);
            const double amp = rng.gaussian(amp_c, amp_jitter);
            SpectralSample sample;
            sample.label = static_cast<int>(c);
            sample.s11.resize(bins);
            sample.s21.resize(bins);
            for (std::size_t f = 0; f < bins; ++f) {
                const double x = static_cast<double>(f) / static_cast<double>(bins - 1);
                const double bump = amp * std::exp(-(x - center) * (x - center) /
                                                   (2.0 * width * width));
                sample.s21[f] = bump + 0.08 + rng.gaussian(0.0, noise_sigma);
                sample.s11[f] = 0.95 - 0.8 * bump + rng.gaussian(0.0, noise_sigma);
            }
            samples.push_back(std::move(sample));
        }
    }
    return samples;
}

std::vector<double> derive_features(const SpectralSample& s) {
    const std::size_t f = s.s11.size();
    if (f < 2 || s.s21.size() != f)
        throw std::invalid_argument("derive_features: need matching s11/s21 with >= 2 bins");

    std::vector<double> out;
    out.reserve(6 * f - 2);
    out.insert(out.end(), s.s11.begin(), s.s11.end());
    out.insert(out.end(), s.s21.begin(), s.s21.end());
    for (std::size_t i = 0; i < f; ++i) out.push_back(s.s11[i] - s.s21[i]);
    // Ratio guard: keeps the denominator away from zero without flipping
    // its sign (eps is 1e-6 of the unit signal scale).
    const double eps = 1e-6;
    for (std::size_t i = 0; i < f; ++i) {
        const double denom = s.s21[i] + (s.s21[i] >= 0.0 ? eps : -eps);
        out.push_back(s.s11[i] / denom);
    }
    for (std::size_t i = 0; i + 1 < f; ++i) out.push_back(s.s11[i + 1] - s.s11[i]);
    for (std::size_t i = 0; i + 1 < f; ++i) out.push_back(s.s21[i + 1] - s.s21[i]);
    return out;
}

Standardizer fit_standardizer(const LabeledData& train) {
    if (train.empty()) throw std::invalid_argument("fit_standardizer: empty training set");
    const std::size_t dim = train.x.front().size();
    const double n = static_cast<double>(train.size());

    Standardizer st;
    st.means.assign(dim, 0.0);
    st.stds.assign(dim, 0.0);
    for (const auto& row : train.x) {
        if (row.size() != dim)
            throw std::invalid_argument("fit_standardizer: inconsistent feature width");
        for (std::size_t j = 0; j < dim; ++j) st.means[j] += row[j];
    }
    for (double& m : st.means) m /= n;
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = row[j] - st.means[j];
            st.stds[j] += d * d;
        }
    for (double& s : st.stds) {
        s = std::sqrt(s / n);
        if (s == 0.0) s = 1.0;
    }
    return st;
}

std::vector<double> Standardizer::apply(const std::vector<double>& x) const {
    if (x.size() != means.size())
        throw std::invalid_argument("Standardizer: feature width mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - means[j]) / stds[j];
    return out;
}

void Standardizer::apply_in_place(LabeledData& data) const {
    for (auto& row : data.x) row = apply(row);
}

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

}  // namespace

SmoteResult smote(const LabeledData& train, std::size_t k, std::size_t num_classes, Rng& rng) {
    SmoteResult result;
    result.data = train;

    std::vector<std::vector<std::size_t>> by_class(num_classes);
    for (std::size_t i = 0; i < train.size(); ++i) {
        const int y = train.y[i];
        if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
            throw std::out_of_range("smote: label out of range");
        by_class[y].push_back(i);
    }
    std::size_t majority = 0;
    for (const auto& idx : by_class) majority = std::max(majority, idx.size());

    for (std::size_t c = 0; c < num_classes; ++c) {
        const auto& idx = by_class[c];
        if (idx.empty() || idx.size() >= majority) continue;
        const std::size_t need = majority - idx.size();

        if (idx.size() == 1) {
            // k-NN is undefined for a lone sample; duplicate with tiny jitter.
            for (std::size_t s = 0; s < need; ++s) {
                std::vector<double> p = train.x[idx[0]];
                for (double& v : p) v += rng.gaussian(0.0, 1e-6);
                result.parents.emplace_back(idx[0], idx[0]);
                result.data.push_back(std::move(p), static_cast<int>(c));
            }
            continue;
        }

        const std::size_t k_eff = std::min(k, idx.size() - 1);
        // Neighbor lists: k_eff nearest same-class samples per minority point.
        std::vector<std::vector<std::size_t>> neighbors(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(idx.size() - 1);
            for (std::size_t b = 0; b < idx.size(); ++b) {
                if (a == b) continue;
                dist.emplace_back(sq_distance(train.x[idx[a]], train.x[idx[b]]), idx[b]);
            }
            std::sort(dist.begin(), dist.end());
            for (std::size_t j = 0; j < k_eff; ++j) neighbors[a].push_back(dist[j].second);
        }

        for (std::size_t s = 0; s < need; ++s) {
            const std::size_t a = rng.uniform_index(idx.size());
            const std::size_t nn = neighbors[a][rng.uniform_index(k_eff)];
            const double u = rng.uniform();
            std::vector<double> p(train.x[idx[a]].size());
            for (std::size_t j = 0; j < p.size(); ++j)
                p[j] = train.x[idx[a]][j] + u * (train.x[nn][j] - train.x[idx[a]][j]);
            result.parents.emplace_back(idx[a], nn);
            result.data.push_back(std::move(p), static_cast<int>(c));
        }
    }
    return result;
}

std::vector<ClientShard> partition(const LabeledData& data, std::size_t n_clients,
                                   double concentration, std::size_t min_shard, Rng& rng) {
    if (n_clients < 1) throw std::invalid_argument("partition: n_clients must be >= 1");
    if (data.size() < n_clients)
        throw std::invalid_argument("partition: more clients than samples");

    std::vector<std::vector<std::size_t>> by_class(kNumClasses);
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data.y[i]].push_back(i);

    std::vector<std::vector<std::size_t>> assigned(n_clients);
    if (concentration <= 0.0) {
        // IID mode: per-class round robin, offset per class so the
        // remainders do not pile onto the same clients.
        for (std::size_t c = 0; c < kNumClasses; ++c)
            for (std::size_t j = 0; j < by_class[c].size(); ++j)
                assigned[(j + c) % n_clients].push_back(by_class[c][j]);
    } else {
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            std::vector<double> props(n_clients);
            double sum = 0.0;
            for (double& p : props) {
                p = rng.gamma(concentration);
                sum += p;
            }
            if (sum <= 0.0) {
                std::fill(props.begin(), props.end(), 1.0);
                sum = static_cast<double>(n_clients);
            }
            std::vector<double> cdf(n_clients);
            double acc = 0.0;
            for (std::size_t i = 0; i < n_clients; ++i) {
                acc += props[i] / sum;
                cdf[i] = acc;
            }
            cdf.back() = 1.0;
            for (std::size_t raw : by_class[c]) {
                const double u = rng.uniform();
                const std::size_t client =
                    std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
                assigned[std::min(client, n_clients - 1)].push_back(raw);
            }
        }
    }

    // Rebalance so no shard falls below the minimum: move samples from the
    // currently largest shard.
    const std::size_t feasible_min =
        std::max<std::size_t>(1, std::min(min_shard, data.size() / n_clients));
    for (;;) {
        std::size_t smallest = 0, largest = 0;
        for (std::size_t i = 1; i < n_clients; ++i) {
            if (assigned[i].size() < assigned[smallest].size()) smallest = i;
            if (assigned[i].size() > assigned[largest].size()) largest = i;
        }
        if (assigned[smallest].size() >= feasible_min) break;
        assigned[smallest].push_back(assigned[largest].back());
        assigned[largest].pop_back();
    }

    std::vector<ClientShard> shards;
    shards.reserve(n_clients);
    for (std::size_t i = 0; i < n_clients; ++i) {
        ClientShard shard;
        shard.client_id = static_cast<int>(i);

        auto& idx = assigned[i];
        for (std::size_t j = idx.size(); j > 1; --j)
            std::swap(idx[j - 1], idx[rng.uniform_index(j)]);

        const std::size_t n = idx.size();
        std::size_t n_train = n;
        if (n >= 2) {
            n_train = static_cast<std::size_t>(std::lround(0.8 * static_cast<double>(n)));
            n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
        }
        for (std::size_t j = 0; j < n; ++j) {
            auto& dest = (j < n_train) ? shard.train : shard.validation;
            dest.push_back(data.x[idx[j]], data.y[idx[j]]);
        }
        shards.push_back(std::move(shard));
    }
    return shards;
}

ClientShard corrupt_shard(const ClientShard& shard, Rng& rng) {
    if (shard.behavior.kind != BehaviorKind::kLabelFlip) return shard;

    ClientShard out = shard;
    const std::size_t n = out.train.size();
    const std::size_t n_flips = static_cast<std::size_t>(
        std::lround(shard.behavior.flip_fraction * static_cast<double>(n)));

    // Exactly n_flips distinct positions via a partial Fisher-Yates.
    std::vector<std::size_t> pos(n);
    std::iota(pos.begin(), pos.end(), 0);
    for (std::size_t j = 0; j < n_flips && j < n; ++j)
        std::swap(pos[j], pos[j + rng.uniform_index(n - j)]);
    for (std::size_t j = 0; j < n_flips && j < n; ++j) {
        int& label = out.train.y[pos[j]];
        const int r = static_cast<int>(rng.uniform_index(kNumClasses - 1));
        label = (r >= label) ? r + 1 : r;
    }
    return out;
}

std::uint64_t dataset_hash(const std::vector<SpectralSample>& samples) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t bits) {
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const auto& s : samples) {
        mix(static_cast<std::uint64_t>(s.label));
        for (double v : s.s11) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof(bits));
            mix(bits);
        }
        for (double v : s.s21) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof(bits));
            mix(bits);
        }
    }
    return h;
}

void export_dataset_csv(const std::vector<SpectralSample>& samples, const std::string& path) {
    if (samples.empty()) throw std::invalid_argument("export_dataset_csv: empty dataset");
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("export_dataset_csv: cannot open " + tmp);
        const std::size_t f = samples.front().s11.size();
        for (std::size_t i = 0; i < f; ++i) out << "s11_" << i << ',';
        for (std::size_t i = 0; i < f; ++i) out << "s21_" << i << ',';
        out << "label\n";
        char buf[64];
        for (const auto& s : samples) {
            for (double v : s.s11) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << buf << ',';
            }
            for (double v : s.s21) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << buf << ',';
            }
            out << s.label << '\n';
        }
        if (!out) throw std::runtime_error("export_dataset_csv: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<SpectralSample> import_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_dataset_csv: cannot open " + path);
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("import_dataset_csv: missing header");
    std::size_t f = 0;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ','))
            if (col.rfind("s11_", 0) == 0) ++f;
    }
    if (f == 0) throw std::runtime_error("import_dataset_csv: no s11 columns in header");

    std::vector<SpectralSample> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        SpectralSample s;
        s.s11.reserve(f);
        s.s21.reserve(f);
        for (std::size_t i = 0; i < 2 * f + 1; ++i) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("import_dataset_csv: short row");
            if (i < f)
                s.s11.push_back(std::stod(cell));
            else if (i < 2 * f)
                s.s21.push_back(std::stod(cell));
            else
                s.label = std::stoi(cell);
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace atsssf
