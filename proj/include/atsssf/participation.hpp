#pragma once

#include <map>
#include <set>
#include <vector>

#include "atsssf/smoothing.hpp"

namespace atsssf {

enum class Participation { kIncluded, kOmitted };

struct ClientStatus {
    int client_id = 0;
    Participation status = Participation::kIncluded;
    /// Consecutive rounds with smoothed trust >= tau while omitted;
    /// reset by any round below tau.
    int rounds_above_tau = 0;
};

using StatusMap = std::map<int, ClientStatus>;

struct RoundDecision {
    std::set<int> omitted_now;
    std::set<int> readmitted_now;
    std::set<int> active_set;
};

/// All clients start included with a zero counter (initial trust is 1).
StatusMap register_clients(const std::vector<int>& ids);

/// Applies the omission threshold, the per-round cap m (lowest trust first,
/// ties by ascending id), and the two-consecutive-round readmission rule.
/// A client readmitted this round is part of this round's active set.
RoundDecision decide_round(StatusMap& statuses, const SmoothedTrust& smoothed,
                           double tau, int m);

}  // namespace atsssf
