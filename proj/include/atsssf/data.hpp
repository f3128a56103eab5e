#pragma once

#include <cstddef>
#include <vector>

namespace atsssf {

/// Labeled feature rows; x[i] is one sample, y[i] its class index.
struct LabeledData {
    std::vector<std::vector<double>> x;
    std::vector<int> y;

    std::size_t size() const { return y.size(); }
    bool empty() const { return y.empty(); }

    void push_back(std::vector<double> features, int label) {
        x.push_back(std::move(features));
        y.push_back(label);
    }
};

}  // namespace atsssf
