#include "oracle_state_trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

std::vector<TraceRound> state_trace(const std::map<int, std::vector<double>>& trust,
                                    double tau, int m) {
    if (trust.empty()) return {};
    const std::size_t rounds = trust.begin()->second.size();
    for (const auto& [id, seq] : trust)
        if (seq.size() != rounds)
            throw std::invalid_argument("oracle::state_trace: ragged trust sequences");

    std::map<int, bool> included;
    std::map<int, int> streak;
    for (const auto& [id, seq] : trust) {
        included[id] = true;
        streak[id] = 0;
    }

    std::vector<TraceRound> out;
    for (std::size_t t = 0; t < rounds; ++t) {
        TraceRound round;

        // Readmissions for clients that entered the round omitted.
        for (const auto& [id, seq] : trust) {
            if (included[id]) continue;
            if (seq[t] >= tau) {
                streak[id] += 1;
                if (streak[id] >= 2) {
                    included[id] = true;
                    streak[id] = 0;
                    round.readmitted_now.insert(id);
                }
            } else {
                streak[id] = 0;
            }
        }

        // Omission candidates among clients that entered included (a client
        // readmitted this round was not included at entry).
        std::vector<std::pair<double, int>> candidates;
        for (const auto& [id, seq] : trust)
            if (included[id] && round.readmitted_now.count(id) == 0 && seq[t] < tau)
                candidates.emplace_back(seq[t], id);
        std::sort(candidates.begin(), candidates.end());
        for (int i = 0; i < m && i < static_cast<int>(candidates.size()); ++i) {
            const int id = candidates[i].second;
            included[id] = false;
            streak[id] = 0;
            round.omitted_now.insert(id);
        }

        for (const auto& [id, ok] : included)
            if (ok) round.active.insert(id);
        out.push_back(std::move(round));
    }
    return out;
}

}  // namespace oracle
