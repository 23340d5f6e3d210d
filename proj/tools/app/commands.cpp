#include "commands.hpp"

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"

namespace bounce::app {

std::string score_file_name(scoring::Flavor flavor) {
    return "scores_" + std::string(scoring::to_string(flavor)) + ".csv";
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, unsigned threads) {
    cfg.validate();
    const Dataset dataset = sim::simulate_universe(cfg.simulation, threads);
    csv::write_files_atomic({{out_dir / csv::kObservationsFile, csv::observations_to_string(dataset)},
                             {out_dir / csv::kProfilesFile, csv::profiles_to_string(dataset)},
                             {out_dir / kConfigEcho, to_json(cfg)}});
}

std::vector<fs::path> cmd_score(const RunConfig& cfg, const fs::path& data_dir,
                                const std::vector<scoring::Flavor>& flavors, const fs::path& out_dir,
                                unsigned threads) {
    cfg.validate();
    const Dataset dataset = csv::ingest_dir(data_dir);
    std::vector<std::pair<fs::path, std::string>> files;
    std::vector<fs::path> written;
    for (auto flavor : flavors) {
        const auto rows = scoring::score_table(dataset, cfg.scoring, flavor, threads);
        written.push_back(out_dir / score_file_name(flavor));
        files.emplace_back(written.back(), scoring::score_table_to_csv(rows));
    }
    files.emplace_back(out_dir / kConfigEcho, to_json(cfg));
    csv::write_files_atomic(files);
    return written;
}

RankSummary cmd_rank(const RunConfig& cfg, const fs::path& score_table, scoring::Flavor flavor,
                     const fs::path& data_dir, const fs::path& out_dir) {
    cfg.validate();
    const Dataset dataset = csv::ingest_dir(data_dir);
    auto rows = scoring::read_score_table(score_table, flavor);
    scoring::attach_liquidity(rows, dataset, cfg.scoring);
    const auto filtered = screen::apply_filters(rows, dataset, cfg.filters);
    const auto ranking = screen::rank(std::span<const screen::ScreenedRow>(filtered.kept),
                                      cfg.score_selector, cfg.filters.drop_bottom_pct);
    csv::write_files_atomic({{out_dir / kRankingFile, screen::ranking_to_csv(ranking)},
                             {out_dir / kExcludedFile, screen::excluded_to_csv(filtered.excluded)},
                             {out_dir / kConfigEcho, to_json(cfg)}});
    return {ranking.size(), filtered.excluded.size()};
}

PortfolioSummary cmd_portfolio(const RunConfig& cfg, const fs::path& ranking_path,
                               const fs::path& out_dir,
                               const std::optional<fs::path>& previous_ranking) {
    cfg.validate();
    const auto ranking = screen::read_ranking(ranking_path);
    PortfolioSummary summary;
    if (previous_ranking) {
        const auto previous = screen::read_ranking(*previous_ranking);
        const auto current = portfolio::construct(previous, cfg.portfolio.top, cfg.portfolio.cap);
        auto result = portfolio::rebalance(current, ranking, cfg.portfolio.rebalance_threshold);
        summary.allocation = std::move(result.allocation);
        summary.rebalanced = result.changed;
    } else {
        summary.allocation = portfolio::construct(ranking, cfg.portfolio.top, cfg.portfolio.cap);
    }
    csv::write_files_atomic({{out_dir / kAllocationFile, portfolio::allocation_to_csv(summary.allocation)},
                             {out_dir / kConfigEcho, to_json(cfg)}});
    return summary;
}

diag::Scenario cmd_diagnose_vol(diag::ScenarioKind kind, double target_return, std::size_t length,
                                std::uint64_t seed, const fs::path& out_dir) {
    auto scenario = diag::make_scenario(kind, target_return, length, seed);
    csv::write_files_atomic({{out_dir / "paths.csv", scenario.paths_csv()},
                             {out_dir / "report.txt", scenario.report()}});
    return scenario;
}

std::string cmd_ingest_check(const fs::path& data_dir) {
    const Dataset dataset = csv::ingest_dir(data_dir);
    std::string out = "securities " + std::to_string(dataset.series.size()) + "\nobservations " +
                      std::to_string(dataset.observation_count()) + "\n";
    if (!dataset.series.empty()) {
        Date first = dataset.series.front().observations.front().date;
        Date last = dataset.series.front().observations.back().date;
        for (const auto& s : dataset.series) {
            first = std::min(first, s.observations.front().date);
            last = std::max(last, s.observations.back().date);
        }
        out += "first_date " + first.to_string() + "\nlast_date " + last.to_string() + "\n";
    }
    return out;
}

}  // namespace bounce::app
