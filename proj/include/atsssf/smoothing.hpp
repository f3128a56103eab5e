#pragma once

#include <map>

#include "atsssf/topsis.hpp"

namespace atsssf {

enum class SmootherMode { kStatic, kAdaptive };

/// EMA coefficient state. In static mode alpha never changes; in adaptive
/// mode it halves when the round's raw-score variance exceeds
/// variance_threshold and otherwise grows by 0.05, clamped to
/// [alpha_floor, alpha_cap].
struct SmootherState {
    double alpha = 0.3;
    SmootherMode mode = SmootherMode::kStatic;
    double variance_threshold = 0.01;
    double alpha_floor = 0.05;
    double alpha_cap = 1.0;

    void validate() const;
};

/// client_id -> smoothed trust, seeded at 1.0 on registration.
using SmoothedTrust = std::map<int, double>;

/// Population variance of the round's raw scores.
double trust_variance(const TrustScores& scores);

SmootherState adapt_alpha(const SmootherState& state, double sigma2);

/// T_hat = alpha * T + (1 - alpha) * T_hat_prev, per client.
/// Every raw client must already have a prev entry.
SmoothedTrust ema_update(const SmoothedTrust& prev, const TrustScores& raw, double alpha);

}  // namespace atsssf
