#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bounce::diag {

/// Summary statistics of one price path.
struct PathStats {
    double total_return = 0.0;         // last / first - 1
    double volatility = 0.0;           // annualized sample std of simple returns
    std::size_t direction_changes = 0; // sign flips between consecutive nonzero returns
    double return_to_vol = 0.0;        // total_return / volatility; sentinel when volatility == 0
};

/// Throws PathTooShort for fewer than two points and ValueError for
/// non-positive prices. When volatility is zero, return_to_vol is 0 for a
/// zero return and +/-inf otherwise.
PathStats path_stats(std::span<const double> path, double periods_per_year = 252.0);

std::vector<double> simple_returns(std::span<const double> path);

/// Number of strict sign changes between consecutive nonzero values.
std::size_t count_direction_changes(std::span<const double> returns);

/// Which volatility limitation a path pair demonstrates.
///  1: two strictly rising paths with equal return; the higher-volatility one
///     (b) is penalized although it never falls.
///  2: equal return; b falls at least once yet has the lower volatility.
///  3: two falling paths with equal (negative) return; a falls steadily with
///     fewer direction changes but has the higher volatility.
enum class ScenarioKind { upward_penalized = 1, downward_not_penalized = 2, downward_movement = 3 };

struct Clause {
    std::string description;
    bool holds = false;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::upward_penalized;
    double target_return = 0.0;
    std::uint64_t seed = 0;
    std::size_t attempts = 0;
    std::vector<double> path_a;
    std::vector<double> path_b;
    PathStats stats_a;
    PathStats stats_b;
    std::vector<Clause> clauses;

    bool all_hold() const;
    /// Plain-text verification report, one line per clause.
    std::string report() const;
    /// CSV with columns step,path_a,path_b.
    std::string paths_csv() const;
};

/// Evaluates the kind's clauses on an arbitrary path pair.
std::vector<Clause> check_clauses(ScenarioKind kind, double target_return,
                                  std::span<const double> path_a, std::span<const double> path_b,
                                  double periods_per_year = 252.0);

/// Generates a pair of `length`-point paths starting at 100 and ending at
/// exactly 100 * (1 + target_return): random perturbations of a geometric
/// ramp, rejected until every clause holds.
/// Throws ValueError on bad arguments (target sign, length < 4) and
/// GenerationFailure when `max_attempts` candidates all fail.
Scenario make_scenario(ScenarioKind kind, double target_return, std::size_t length,
                       std::uint64_t seed, double periods_per_year = 252.0,
                       std::size_t max_attempts = 1000);

}  // namespace bounce::diag
