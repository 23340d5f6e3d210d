#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bounce/date.hpp"
#include "bounce/screener.hpp"

namespace bounce::portfolio {

struct Holding {
    std::string security_id;
    double weight = 0.0;
    double score = 0.0;  // score the weight was built from
};

/// Long-only allocation: weights positive, summing to one, none above cap.
struct PortfolioAllocation {
    Date as_of;
    std::vector<Holding> holdings;  // in rank order
    double cap = 1.0;

    std::size_t size() const { return holdings.size(); }
    double total_weight() const;
    double max_weight() const;
};

/// Clamps weights above `cap` and redistributes the excess across the
/// uncapped names in proportion to their raw weights, until no weight
/// exceeds the cap. `raw` must be strictly positive, sum to one and satisfy
/// cap * size >= 1; it is returned unchanged when nothing exceeds the cap.
/// Terminates after at most raw.size() passes.
std::vector<double> cap_and_redistribute(std::span<const double> raw, double cap);

/// Score-proportional weights u_i = SS_i / sum SS over the first `top`
/// ranked securities, then capped.
/// Throws InfeasibleCap when (selected count) * cap < 1, NonPositiveScore
/// when any selected score is <= 0 or not finite.
PortfolioAllocation construct(std::span<const screen::RankedSecurity> ranked, std::size_t top,
                              double cap, Date as_of = {});

struct RebalanceResult {
    PortfolioAllocation allocation;
    bool changed = false;
};

/// Keeps `current` when the top-`current.size()` membership is unchanged and
/// every holding's relative score change is below `threshold`; rebuilds
/// with construct() otherwise.
RebalanceResult rebalance(const PortfolioAllocation& current,
                          std::span<const screen::RankedSecurity> new_ranking, double threshold,
                          Date as_of = {});

/// Raw weight SS_i / Var(history_i) (sample variance), then capped. A
/// zero-variance candidate is given the largest raw weight among the
/// finite ones; when every candidate has zero variance the raw weights fall
/// back to the scores. Throws InsufficientHistory when a candidate has
/// fewer than two historical scores.
PortfolioAllocation variance_penalized_weights(
    std::span<const screen::RankedSecurity> ranked,
    const std::map<std::string, std::vector<double>>& score_history, std::size_t top, double cap,
    Date as_of = {});

inline constexpr std::string_view kAllocationHeader = "security_id,weight";

std::string allocation_to_csv(const PortfolioAllocation& allocation);

}  // namespace bounce::portfolio
