#pragma once

#include <map>
#include <set>
#include <vector>

// Independent round-by-round simulation of the omission/readmission rules,
// used to check the participation module. No library code is shared.
namespace oracle {

struct TraceRound {
    std::set<int> omitted_now;
    std::set<int> readmitted_now;
    std::set<int> active;
};

/// trust[id] is a per-round smoothed-trust sequence (all the same length).
/// Rules: an included client below tau is an omission candidate; the m
/// lowest-trust candidates (ties by ascending id) are omitted. An omitted
/// client at or above tau for two consecutive rounds is readmitted and is
/// active in the round of readmission.
std::vector<TraceRound> state_trace(const std::map<int, std::vector<double>>& trust,
                                    double tau, int m);

}  // namespace oracle
