#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "bounce/csv_io.hpp"
#include "bounce/screener.hpp"
#include "test_support.hpp"

namespace {

using namespace bounce;
using bounce::testing::TempDir;
using bounce::testing::write_text;
namespace fs = std::filesystem;

int run(const std::string& args) {
    const std::string cmd = std::string(BOUNCE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::size_t line_count(const fs::path& p) {
    std::size_t n = 0;
    for (char c : csv::read_file(p)) n += c == '\n';
    return n;
}

void write_ranking(const fs::path& p, const std::vector<double>& scores) {
    std::string text(screen::kRankingHeader);
    text += '\n';
    for (std::size_t i = 0; i < scores.size(); ++i) {
        text += std::to_string(i + 1) + ",S" + std::to_string(i) + "," + csv::format_number(scores[i]) + ",\n";
    }
    write_text(p, text);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    TempDir dir;
    EXPECT_EQ(run("score --data " + q(dir.path()) + " --flavor weekly"), 2);
    EXPECT_EQ(run("rank --scores /nonexistent.csv --data " + q(dir.path())), 2);
    EXPECT_EQ(run("diagnose-vol --kind 4"), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, PortfolioExamples) {
    TempDir dir;
    write_ranking(dir / "ranking.csv", {5, 3, 2});
    EXPECT_EQ(run("portfolio --ranking " + q(dir / "ranking.csv") + " --top 3 --cap 1.0 --out " +
                  q(dir / "p")),
              0);
    EXPECT_EQ(csv::read_file(dir / "p" / "allocation.csv"), "security_id,weight\nS0,0.5\nS1,0.3\nS2,0.2\n");

    EXPECT_EQ(run("portfolio --ranking " + q(dir / "ranking.csv") + " --top 1 --cap 1.0 --out " +
                  q(dir / "one")),
              0);
    EXPECT_EQ(csv::read_file(dir / "one" / "allocation.csv"), "security_id,weight\nS0,1\n");

    EXPECT_EQ(run("portfolio --ranking " + q(dir / "ranking.csv") + " --top 2 --cap 0.10 --out " +
                  q(dir / "bad")),
              1);
    EXPECT_FALSE(fs::exists(dir / "bad" / "allocation.csv"));
}

TEST(Cli, SimulateMinimalAndDeterministic) {
    TempDir dir;
    ASSERT_EQ(run("simulate --n-securities 1 --n-days 1 --out " + q(dir / "tiny")), 0);
    EXPECT_EQ(line_count(dir / "tiny" / "observations.csv"), 2u);
    EXPECT_EQ(line_count(dir / "tiny" / "profiles.csv"), 2u);

    ASSERT_EQ(run("simulate --master-seed 5 --n-securities 20 --n-days 30 --out " + q(dir / "a")), 0);
    ASSERT_EQ(run("simulate --master-seed 5 --n-securities 20 --n-days 30 --threads 4 --out " + q(dir / "b")), 0);
    EXPECT_EQ(csv::read_file(dir / "a" / "observations.csv"), csv::read_file(dir / "b" / "observations.csv"));
    EXPECT_EQ(run("ingest-check --data " + q(dir / "a")), 0);
}

TEST(Cli, ConfigPrecedence) {
    TempDir dir;
    write_text(dir / "cfg.json", R"({"simulation": {"master_seed": 7, "n_securities": 3, "n_days": 5}})");
    ASSERT_EQ(run("--config " + q(dir / "cfg.json") + " simulate --master-seed 9 --out " + q(dir / "o")), 0);
    const auto echo = csv::read_file(dir / "o" / "config.json");
    EXPECT_NE(echo.find("\"master_seed\": 9"), std::string::npos) << echo;
    EXPECT_NE(echo.find("\"n_securities\": 3"), std::string::npos) << echo;
    EXPECT_EQ(line_count(dir / "o" / "observations.csv"), 16u);
    write_text(dir / "broken.json", "{");
    EXPECT_EQ(run("--config " + q(dir / "broken.json") + " simulate --out " + q(dir / "x")), 1);
}

TEST(Cli, ScoreRankDropBottom) {
    TempDir dir;
    Dataset ds;
    for (int i = 0; i < 10; ++i) {
        const std::string id = "S" + std::to_string(i);
        auto s = bounce::testing::flat_series(id, 70);
        for (std::size_t t = 0; t < s.size(); ++t) {
            s.observations[t].loan_rate = 0.02 + 0.001 * i + 0.0005 * double(t % 3);
            s.observations[t].alt_loan_rate = s.observations[t].loan_rate + 0.01;
        }
        ds.series.push_back(s);
        ds.profiles.push_back(bounce::testing::profile(id));
    }
    csv::export_dir(ds, dir / "data");
    ASSERT_EQ(run("score --data " + q(dir / "data") + " --flavor ma --flavor last-day --out " + q(dir / "s")), 0);
    EXPECT_EQ(line_count(dir / "s" / "scores_ma.csv"), 11u);
    EXPECT_TRUE(fs::exists(dir / "s" / "scores_last-day.csv"));

    write_text(dir / "permissive.json",
               R"({"filters": {"min_si_usd": null, "min_loan_rate": null, "min_dtc": null,
                   "min_lbg": null, "max_la_usd": null, "min_adv_usd": null,
                   "min_buy_rating": null, "min_beta": null}})");
    ASSERT_EQ(run("--config " + q(dir / "permissive.json") + " rank --scores " + q(dir / "s" / "scores_ma.csv") +
                  " --data " + q(dir / "data") + " --drop-bottom-pct 20 --out " + q(dir / "r")),
              0);
    EXPECT_EQ(line_count(dir / "r" / "ranking.csv"), 9u);
    const auto ranking = screen::read_ranking(dir / "r" / "ranking.csv");
    EXPECT_EQ(ranking.front().security_id, "S9");

    // Default filters reject every flat series (DTC 5 passes, LBG 1 fails).
    EXPECT_EQ(run("rank --scores " + q(dir / "s" / "scores_ma.csv") + " --data " + q(dir / "data") +
                  " --out " + q(dir / "empty")),
              1);
    EXPECT_FALSE(fs::exists(dir / "empty" / "ranking.csv"));
    EXPECT_FALSE(fs::exists(dir / "empty" / "excluded.csv"));

    write_text(dir / "exclude.csv", "security_id\nS9\n");
    ASSERT_EQ(run("--config " + q(dir / "permissive.json") + " rank --scores " + q(dir / "s" / "scores_ma.csv") +
                  " --data " + q(dir / "data") + " --exclusion-list " + q(dir / "exclude.csv") +
                  " --drop-bottom-pct 0 --out " + q(dir / "r2")),
              0);
    EXPECT_EQ(screen::read_ranking(dir / "r2" / "ranking.csv").front().security_id, "S8");
    EXPECT_NE(csv::read_file(dir / "r2" / "excluded.csv").find("S9,exclusion_list"), std::string::npos);
}

TEST(Cli, DiagnoseVol) {
    TempDir dir;
    EXPECT_EQ(run("diagnose-vol --kind 3 --target-return -0.09 --seed 4 --out " + q(dir.path())), 0);
    EXPECT_EQ(line_count(dir / "paths.csv"), 22u);
    EXPECT_TRUE(fs::exists(dir / "report.txt"));
    EXPECT_EQ(run("diagnose-vol --kind 3 --target-return 0.09 --out " + q(dir / "bad")), 1);
}

TEST(Cli, IngestErrorsExitOne) {
    TempDir dir;
    write_text(dir / "observations.csv", std::string(csv::kObservationsHeader) +
                                             "\n2021-03-01,AAA,50,100,1000,200,5000,0.05,0.01\n");
    write_text(dir / "profiles.csv", std::string(csv::kProfilesHeader) + "\nAAA,JP,3,1\n");
    EXPECT_EQ(run("ingest-check --data " + q(dir.path())), 1);
}

}  // namespace
