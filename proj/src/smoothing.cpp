#include "atsssf/smoothing.hpp"

#include <algorithm>
#include <stdexcept>

namespace atsssf {

void SmootherState::validate() const {
    if (!(alpha_floor > 0.0 && alpha_floor <= alpha && alpha <= alpha_cap))
        throw std::invalid_argument("SmootherState: need 0 < alpha_floor <= alpha <= alpha_cap");
    if (alpha_cap != 1.0) throw std::invalid_argument("SmootherState: alpha_cap must be 1.0");
    if (variance_threshold < 0.0)
        throw std::invalid_argument("SmootherState: variance_threshold must be >= 0");
}

double trust_variance(const TrustScores& scores) {
    if (scores.empty()) throw std::invalid_argument("trust_variance: empty score set");
    // Shifted two-pass form: exactly zero for identical scores.
    const double shift = scores.begin()->second;
    double mean = 0.0;
    for (const auto& [id, t] : scores) mean += t - shift;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (const auto& [id, t] : scores) var += (t - shift - mean) * (t - shift - mean);
    return var / static_cast<double>(scores.size());
}

SmootherState adapt_alpha(const SmootherState& state, double sigma2) {
    if (state.mode == SmootherMode::kStatic) return state;
    SmootherState next = state;
    if (sigma2 > state.variance_threshold)
        next.alpha = std::max(0.5 * state.alpha, state.alpha_floor);
    else
        next.alpha = std::min(state.alpha + 0.05, state.alpha_cap);
    return next;
}

SmoothedTrust ema_update(const SmoothedTrust& prev, const TrustScores& raw, double alpha) {
    SmoothedTrust out = prev;
    for (const auto& [id, t] : raw) {
        auto it = out.find(id);
        if (it == out.end())
            throw std::invalid_argument("ema_update: unknown client id " + std::to_string(id));
        // Incremental form is exact at the fixed point raw == prev; the
        // alpha == 1 branch keeps the identity case exact as well.
        const double next = (alpha == 1.0) ? t : it->second + alpha * (t - it->second);
        it->second = std::clamp(next, 0.0, 1.0);
    }
    return out;
}

}  // namespace atsssf
