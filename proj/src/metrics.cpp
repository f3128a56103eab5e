#include "atsssf/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace atsssf {

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long c : row) t += c;
    return t;
}

std::string ConfusionMatrix::to_csv() const {
    std::string out;
    for (std::size_t p = 0; p < k; ++p) {
        if (p > 0) out += ',';
        out += std::to_string(p);
    }
    out += '\n';
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t p = 0; p < k; ++p) {
            if (p > 0) out += ',';
            out += std::to_string(counts[t][p]);
        }
        out += '\n';
    }
    return out;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& predictions,
                                 const std::vector<int>& labels,
                                 std::size_t k) {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("confusion_matrix: predictions/labels length mismatch");
    if (k < 2) throw std::invalid_argument("confusion_matrix: k must be >= 2");
    ConfusionMatrix cm(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int t = labels[i];
        const int p = predictions[i];
        if (t < 0 || static_cast<std::size_t>(t) >= k || p < 0 ||
            static_cast<std::size_t>(p) >= k)
            throw std::out_of_range("confusion_matrix: class index out of range");
        ++cm.counts[t][p];
    }
    return cm;
}

MetricVector macro_metrics(const ConfusionMatrix& cm) {
    const long total = cm.total();
    if (total == 0) throw std::invalid_argument("macro_metrics: empty confusion matrix");

    long trace = 0;
    double prec_sum = 0.0, rec_sum = 0.0, f1_sum = 0.0;
    for (std::size_t c = 0; c < cm.k; ++c) {
        const long tp = cm.counts[c][c];
        trace += tp;
        long fp = 0, fn = 0;
        for (std::size_t r = 0; r < cm.k; ++r) {
            if (r == c) continue;
            fp += cm.counts[r][c];
            fn += cm.counts[c][r];
        }
        const double prec = (tp + fp == 0) ? 0.0 : static_cast<double>(tp) / (tp + fp);
        const double rec = (tp + fn == 0) ? 0.0 : static_cast<double>(tp) / (tp + fn);
        const double f1 = (prec + rec == 0.0) ? 0.0 : 2.0 * prec * rec / (prec + rec);
        prec_sum += prec;
        rec_sum += rec;
        f1_sum += f1;
    }

    MetricVector m;
    m.accuracy = static_cast<double>(trace) / total;
    m.macro_precision = prec_sum / cm.k;
    m.macro_recall = rec_sum / cm.k;
    m.macro_f1 = f1_sum / cm.k;
    return m;
}

}  // namespace atsssf
