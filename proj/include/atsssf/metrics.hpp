#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace atsssf {

/// k x k confusion counts; rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::size_t k = 0;
    std::vector<std::vector<long>> counts;

    explicit ConfusionMatrix(std::size_t k_ = 0)
        : k(k_), counts(k_, std::vector<long>(k_, 0)) {}

    long total() const;
    /// Row-major CSV block with a header row of predicted-class indices.
    std::string to_csv() const;
};

/// One client's per-round criteria row: [Acc, Prec, Rec, F1], each in [0,1].
struct MetricVector {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& predictions,
                                 const std::vector<int>& labels,
                                 std::size_t k);

/// Accuracy = trace/total; macro scores are unweighted class means.
/// A class with a zero denominator (absent from predictions or labels)
/// contributes 0 to the macro average.
MetricVector macro_metrics(const ConfusionMatrix& cm);

}  // namespace atsssf
