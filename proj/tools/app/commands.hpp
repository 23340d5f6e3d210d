#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bounce/path_diagnostics.hpp"
#include "bounce/portfolio.hpp"
#include "run_config.hpp"

namespace bounce::app {

namespace fs = std::filesystem;

inline constexpr const char* kConfigEcho = "config.json";
inline constexpr const char* kRankingFile = "ranking.csv";
inline constexpr const char* kExcludedFile = "excluded.csv";
inline constexpr const char* kAllocationFile = "allocation.csv";

std::string score_file_name(scoring::Flavor flavor);

// Each stage reads its inputs from files and writes its outputs atomically
// into out_dir together with an echo of the resolved config.

/// observations.csv, profiles.csv.
void cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, unsigned threads = 1);

/// One scores_<flavor>.csv per requested flavor.
std::vector<fs::path> cmd_score(const RunConfig& cfg, const fs::path& data_dir,
                                const std::vector<scoring::Flavor>& flavors, const fs::path& out_dir,
                                unsigned threads = 1);

struct RankSummary {
    std::size_t ranked = 0;
    std::size_t excluded = 0;
};

/// ranking.csv and excluded.csv. `data_dir` supplies profiles and the
/// observations for the trailing liquidity average.
RankSummary cmd_rank(const RunConfig& cfg, const fs::path& score_table, scoring::Flavor flavor,
                     const fs::path& data_dir, const fs::path& out_dir);

struct PortfolioSummary {
    portfolio::PortfolioAllocation allocation;
    bool rebalanced = true;
};

/// allocation.csv. With a previous ranking, the previous allocation is
/// rebuilt from it and only replaced when the rebalance rule fires.
PortfolioSummary cmd_portfolio(const RunConfig& cfg, const fs::path& ranking,
                               const fs::path& out_dir,
                               const std::optional<fs::path>& previous_ranking = std::nullopt);

/// paths.csv and report.txt.
diag::Scenario cmd_diagnose_vol(diag::ScenarioKind kind, double target_return, std::size_t length,
                                std::uint64_t seed, const fs::path& out_dir);

/// Validates a dataset directory and returns a one-paragraph summary.
std::string cmd_ingest_check(const fs::path& data_dir);

}  // namespace bounce::app
