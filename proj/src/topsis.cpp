#include "atsssf/topsis.hpp"

#include <cmath>
#include <stdexcept>

namespace atsssf {

void DecisionMatrix::add_row(int client_id, const MetricVector& m) {
    client_ids.push_back(client_id);
    rows.push_back({m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1});
}

void DecisionMatrix::validate() const {
    if (rows.empty()) throw std::invalid_argument("DecisionMatrix: no rows");
    if (rows.size() != client_ids.size())
        throw std::invalid_argument("DecisionMatrix: rows/ids misaligned");
    for (const auto& row : rows)
        for (double v : row)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("DecisionMatrix: entry outside [0,1]");
}

void CriteriaWeights::validate() const {
    double sum = 0.0;
    for (double x : w) {
        if (x < 0.0) throw std::invalid_argument("CriteriaWeights: negative weight");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("CriteriaWeights: weights must sum to 1");
}

std::vector<std::array<double, kCriteria>> normalize_columns(const DecisionMatrix& d) {
    d.validate();
    std::array<double, kCriteria> norm{};
    for (const auto& row : d.rows)
        for (std::size_t j = 0; j < kCriteria; ++j) norm[j] += row[j] * row[j];
    for (std::size_t j = 0; j < kCriteria; ++j) norm[j] = std::sqrt(norm[j]);

    std::vector<std::array<double, kCriteria>> r = d.rows;
    for (auto& row : r)
        for (std::size_t j = 0; j < kCriteria; ++j)
            if (norm[j] > 0.0) row[j] /= norm[j];
    return r;
}

std::pair<std::array<double, kCriteria>, std::array<double, kCriteria>>
ideal_solutions(const std::vector<std::array<double, kCriteria>>& v) {
    if (v.empty()) throw std::invalid_argument("ideal_solutions: empty matrix");
    std::array<double, kCriteria> a_plus = v.front();
    std::array<double, kCriteria> a_minus = v.front();
    for (const auto& row : v) {
        for (std::size_t j = 0; j < kCriteria; ++j) {
            if (row[j] > a_plus[j]) a_plus[j] = row[j];
            if (row[j] < a_minus[j]) a_minus[j] = row[j];
        }
    }
    return {a_plus, a_minus};
}

TrustScores closeness(const std::vector<std::array<double, kCriteria>>& v,
                      const std::vector<int>& client_ids,
                      const std::array<double, kCriteria>& a_plus,
                      const std::array<double, kCriteria>& a_minus) {
    if (v.size() != client_ids.size())
        throw std::invalid_argument("closeness: rows/ids misaligned");
    TrustScores scores;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double s_plus = 0.0, s_minus = 0.0;
        for (std::size_t j = 0; j < kCriteria; ++j) {
            const double dp = v[i][j] - a_plus[j];
            const double dm = v[i][j] - a_minus[j];
            s_plus += dp * dp;
            s_minus += dm * dm;
        }
        s_plus = std::sqrt(s_plus);
        s_minus = std::sqrt(s_minus);
        const double denom = s_plus + s_minus;
        scores[client_ids[i]] = (denom == 0.0) ? 1.0 : s_minus / denom;
    }
    return scores;
}

TrustScores topsis_scores(const DecisionMatrix& d, const CriteriaWeights& w) {
    w.validate();
    auto v = normalize_columns(d);
    for (auto& row : v)
        for (std::size_t j = 0; j < kCriteria; ++j) row[j] *= w.w[j];
    const auto [a_plus, a_minus] = ideal_solutions(v);
    return closeness(v, d.client_ids, a_plus, a_minus);
}

}  // namespace atsssf
