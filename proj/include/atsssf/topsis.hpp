#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "atsssf/metrics.hpp"

namespace atsssf {

inline constexpr std::size_t kCriteria = 4;

/// Per-round client criteria matrix: one row per client, columns
/// (Acc, Prec, Rec, F1), every entry in [0,1].
struct DecisionMatrix {
    std::vector<int> client_ids;
    std::vector<std::array<double, kCriteria>> rows;

    void add_row(int client_id, const MetricVector& m);
    std::size_t size() const { return rows.size(); }
    /// Throws if empty, misaligned, or any entry falls outside [0,1].
    void validate() const;
};

/// Non-negative criteria weights summing to 1 (within 1e-9).
struct CriteriaWeights {
    std::array<double, kCriteria> w{0.25, 0.25, 0.25, 0.25};

    void validate() const;
};

using TrustScores = std::map<int, double>;

/// Column-wise Euclidean normalization r_ij = d_ij / ||d_.j||.
/// An all-zero column stays all zeros.
std::vector<std::array<double, kCriteria>> normalize_columns(const DecisionMatrix& d);

/// Column-wise max (ideal) and min (anti-ideal) of the weighted matrix.
/// All criteria are benefit criteria.
std::pair<std::array<double, kCriteria>, std::array<double, kCriteria>>
ideal_solutions(const std::vector<std::array<double, kCriteria>>& v);

/// Closeness T_i = S-/(S+ + S-) from Euclidean separations to the ideals.
/// When S+ + S- = 0 (all clients identical) the score is 1.0, so a round
/// with no discriminating evidence never triggers omissions.
TrustScores closeness(const std::vector<std::array<double, kCriteria>>& v,
                      const std::vector<int>& client_ids,
                      const std::array<double, kCriteria>& a_plus,
                      const std::array<double, kCriteria>& a_minus);

/// Full pipeline: normalize -> weight -> ideals -> closeness.
TrustScores topsis_scores(const DecisionMatrix& d, const CriteriaWeights& w);

}  // namespace atsssf
