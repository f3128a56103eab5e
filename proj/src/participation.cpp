#include "atsssf/participation.hpp"

#include <algorithm>
#include <stdexcept>

namespace atsssf {

StatusMap register_clients(const std::vector<int>& ids) {
    StatusMap statuses;
    for (int id : ids) {
        auto [it, inserted] = statuses.emplace(id, ClientStatus{id});
        if (!inserted)
            throw std::invalid_argument("register_clients: duplicate id " + std::to_string(id));
    }
    return statuses;
}

RoundDecision decide_round(StatusMap& statuses, const SmoothedTrust& smoothed,
                           double tau, int m) {
    if (!(tau >= 0.0 && tau < 1.0))
        throw std::invalid_argument("decide_round: tau must lie in [0,1)");
    if (m < 0) throw std::invalid_argument("decide_round: m must be >= 0");

    RoundDecision decision;

    // (trust, id) pairs of included clients that fell below tau.
    std::vector<std::pair<double, int>> candidates;
    for (auto& [id, st] : statuses) {
        auto it = smoothed.find(id);
        if (it == smoothed.end())
            throw std::invalid_argument("decide_round: missing smoothed score for client " +
                                        std::to_string(id));
        const double t_hat = it->second;

        if (st.status == Participation::kIncluded) {
            if (t_hat < tau) candidates.emplace_back(t_hat, id);
        } else {
            if (t_hat >= tau) {
                ++st.rounds_above_tau;
                if (st.rounds_above_tau >= 2) {
                    st.status = Participation::kIncluded;
                    st.rounds_above_tau = 0;
                    decision.readmitted_now.insert(id);
                }
            } else {
                st.rounds_above_tau = 0;
            }
        }
    }

    std::sort(candidates.begin(), candidates.end());
    const std::size_t cap = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < cap; ++i) {
        const int id = candidates[i].second;
        auto& st = statuses.at(id);
        st.status = Participation::kOmitted;
        st.rounds_above_tau = 0;
        decision.omitted_now.insert(id);
    }

    for (const auto& [id, st] : statuses)
        if (st.status == Participation::kIncluded) decision.active_set.insert(id);
    return decision;
}

}  // namespace atsssf
