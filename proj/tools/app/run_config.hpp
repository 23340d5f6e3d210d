#pragma once

#include <filesystem>
#include <string>

#include "bounce/scoring.hpp"
#include "bounce/screener.hpp"
#include "bounce/simulation.hpp"

namespace bounce::app {

struct PortfolioConfig {
    std::size_t top = 20;
    double cap = 0.10;
    double rebalance_threshold = 0.10;
};

/// Merged configuration of every pipeline stage. A run is reproducible from
/// this value alone; to_json() output is what gets echoed next to results.
struct RunConfig {
    sim::SeedConfig simulation = sim::SeedConfig::defaults();
    scoring::ScoreConfig scoring;
    screen::FilterConfig filters;
    int score_selector = 4;
    PortfolioConfig portfolio;

    /// Throws ConfigError / MissingVariableRange / InvalidSeedRange.
    void validate() const;
};

/// Parses a config document on top of the built-in defaults. Keys that are
/// absent keep their default; a "variables" block, when present, must list
/// all seven variables. Null thresholds mean "disabled".
RunConfig parse_run_config(const std::string& json_text, const RunConfig& base = {});
RunConfig load_run_config(const std::filesystem::path& path, const RunConfig& base = {});

std::string to_json(const RunConfig& config);

int parse_score_selector(std::string_view name);
std::string_view score_selector_name(int selector);

}  // namespace bounce::app
