// bounce: simulate lending data, score, screen, and build capped portfolios.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "app/commands.hpp"
#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"

namespace {

using namespace bounce;
namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::size_t> n_securities;
    std::optional<std::size_t> n_days;
    unsigned threads = 1;
    std::string out = ".";
    std::string data_dir;
    std::vector<std::string> flavors;
    std::string flavor = "ma";
    std::optional<std::string> score;
    std::optional<std::size_t> window;
    std::optional<double> rf;
    std::optional<double> drop_bottom_pct;
    std::string scores_path;
    std::optional<std::string> exclusion_list;
    std::string ranking_path;
    std::optional<std::string> previous_ranking;
    std::optional<std::size_t> top;
    std::optional<double> cap;
    std::optional<double> threshold;
    int kind = 1;
    double target_return = 0.09;
    std::size_t length = 21;
    std::uint64_t seed = 1;
};

// Precedence: command-line flag > config file > built-in default.
app::RunConfig resolve(const Options& o) {
    app::RunConfig cfg;
    if (o.config_path) cfg = app::load_run_config(*o.config_path);
    if (o.master_seed) cfg.simulation.master_seed = *o.master_seed;
    if (o.n_securities) cfg.simulation.n_securities = *o.n_securities;
    if (o.n_days) cfg.simulation.n_days = *o.n_days;
    if (o.window) {
        cfg.scoring.ma_window = *o.window;
        cfg.scoring.vol_window = *o.window;
    }
    if (o.rf) cfg.scoring.rf = *o.rf;
    if (o.drop_bottom_pct) cfg.filters.drop_bottom_pct = *o.drop_bottom_pct;
    if (o.score) cfg.score_selector = app::parse_score_selector(*o.score);
    if (o.exclusion_list) {
        for (auto& id : csv::read_id_list(*o.exclusion_list)) cfg.filters.exclusion_list.insert(id);
    }
    if (o.top) cfg.portfolio.top = *o.top;
    if (o.cap) cfg.portfolio.cap = *o.cap;
    if (o.threshold) cfg.portfolio.rebalance_threshold = *o.threshold;
    cfg.validate();
    return cfg;
}

scoring::Flavor flavor_of(const std::string& text) {
    return *scoring::parse_flavor(text);  // validated by CLI11
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Securities-lending short scores, screening and bounce-basket construction"};
    cli.require_subcommand(1);
    Options o;

    const std::vector<std::string> flavor_names{"ma", "first-day", "last-day"};
    const std::vector<std::string> score_names{"one", "two", "three", "four"};

    cli.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);

    auto* simulate = cli.add_subcommand("simulate", "Generate a synthetic lending universe");
    simulate->add_option("--master-seed", o.master_seed, "Master RNG seed");
    simulate->add_option("--n-securities", o.n_securities, "Number of securities")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--n-days", o.n_days, "Trading days per security")->check(CLI::PositiveNumber);
    simulate->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    simulate->add_option("--out", o.out, "Output directory");

    auto* score = cli.add_subcommand("score", "Compute short-score tables");
    score->add_option("--data", o.data_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    score->add_option("--flavor", o.flavors, "ma, first-day or last-day (repeatable)")
        ->check(CLI::IsMember(flavor_names));
    score->add_option("--window", o.window, "Moving-average and volatility window (days)")
        ->check(CLI::Range(2, 100000));
    score->add_option("--rf", o.rf, "Rate threshold (annual fraction)");
    score->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    score->add_option("--out", o.out, "Output directory");

    auto* rank = cli.add_subcommand("rank", "Filter and rank a score table");
    rank->add_option("--scores", o.scores_path, "Score-table CSV")->required()->check(CLI::ExistingFile);
    rank->add_option("--data", o.data_dir, "Dataset directory (profiles, liquidity)")
        ->required()
        ->check(CLI::ExistingDirectory);
    rank->add_option("--flavor", o.flavor, "Flavor the score table was built with")
        ->check(CLI::IsMember(flavor_names));
    rank->add_option("--score", o.score, "Score used for ranking")->check(CLI::IsMember(score_names));
    rank->add_option("--drop-bottom-pct", o.drop_bottom_pct, "Bottom percentage removed")
        ->check(CLI::Range(0.0, 99.999999));
    rank->add_option("--exclusion-list", o.exclusion_list, "CSV of security_ids to remove")
        ->check(CLI::ExistingFile);
    rank->add_option("--out", o.out, "Output directory");

    auto* port = cli.add_subcommand("portfolio", "Build a capped score-weighted allocation");
    port->add_option("--ranking", o.ranking_path, "Ranking CSV")->required()->check(CLI::ExistingFile);
    port->add_option("--top", o.top, "Number of holdings")->check(CLI::PositiveNumber);
    port->add_option("--cap", o.cap, "Maximum weight per holding");
    port->add_option("--previous-ranking", o.previous_ranking, "Ranking behind the current holdings")
        ->check(CLI::ExistingFile);
    port->add_option("--threshold", o.threshold, "Relative score change that triggers a rebalance");
    port->add_option("--out", o.out, "Output directory");

    auto* diagnose = cli.add_subcommand("diagnose-vol", "Generate a volatility-limitation path pair");
    diagnose->add_option("--kind", o.kind, "Scenario 1, 2 or 3")->check(CLI::IsMember({1, 2, 3}));
    diagnose->add_option("--target-return", o.target_return, "Total return of both paths");
    diagnose->add_option("--length", o.length, "Points per path")->check(CLI::Range(4, 100000));
    diagnose->add_option("--seed", o.seed, "Generator seed");
    diagnose->add_option("--out", o.out, "Output directory");

    auto* check = cli.add_subcommand("ingest-check", "Validate a dataset directory");
    check->add_option("--data", o.data_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const fs::path out = o.out;
        if (simulate->parsed()) {
            const auto cfg = resolve(o);
            app::cmd_simulate(cfg, out, o.threads);
            std::cout << "wrote " << cfg.simulation.n_securities << " securities x "
                      << cfg.simulation.n_days << " days to " << out.string() << "\n";
        } else if (score->parsed()) {
            const auto cfg = resolve(o);
            std::vector<scoring::Flavor> flavors;
            if (o.flavors.empty()) o.flavors.push_back("ma");
            for (const auto& f : o.flavors) flavors.push_back(flavor_of(f));
            for (const auto& path : app::cmd_score(cfg, o.data_dir, flavors, out, o.threads)) {
                std::cout << "wrote " << path.string() << "\n";
            }
        } else if (rank->parsed()) {
            const auto cfg = resolve(o);
            const auto summary = app::cmd_rank(cfg, o.scores_path, flavor_of(o.flavor), o.data_dir, out);
            std::cout << "ranked " << summary.ranked << ", excluded " << summary.excluded << "\n";
        } else if (port->parsed()) {
            const auto cfg = resolve(o);
            const auto summary = app::cmd_portfolio(cfg, o.ranking_path, out,
                                                    o.previous_ranking
                                                        ? std::optional<fs::path>(*o.previous_ranking)
                                                        : std::nullopt);
            std::cout << "holdings " << summary.allocation.size() << ", rebalanced "
                      << (summary.rebalanced ? "yes" : "no") << "\n";
        } else if (diagnose->parsed()) {
            const auto scenario = app::cmd_diagnose_vol(static_cast<diag::ScenarioKind>(o.kind),
                                                        o.target_return, o.length, o.seed, out);
            std::cout << scenario.report();
        } else if (check->parsed()) {
            std::cout << app::cmd_ingest_check(o.data_dir);
        }
    } catch (const bounce::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
