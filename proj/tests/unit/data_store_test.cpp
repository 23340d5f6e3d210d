#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"
#include "bounce/simulation.hpp"
#include "test_support.hpp"

namespace {

using namespace bounce;
using bounce::testing::TempDir;
using bounce::testing::write_text;

const std::string kObsHeader(csv::kObservationsHeader);
const std::string kProfHeader(csv::kProfilesHeader);

std::string message_of(const auto& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

TEST(FormatNumber, ShortestRoundTrip) {
    for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 123456789.123, 1e-300, 6.02e23, 0.0025,
                     std::nextafter(1.0, 2.0)}) {
        const auto text = csv::format_number(x);
        EXPECT_EQ(csv::parse_number(text, "t"), x) << text;
        EXPECT_EQ(text.find('e'), std::string::npos) << text;
    }
    EXPECT_EQ(csv::format_number(0.1), "0.1");
    EXPECT_EQ(csv::format_number(250.0), "250");
    EXPECT_EQ(csv::format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_TRUE(std::isnan(csv::parse_number("nan", "t")));
    EXPECT_THROW(csv::parse_number("1.2.3", "t"), ValueError);
    EXPECT_THROW(csv::parse_number("", "t"), ValueError);
    EXPECT_THROW(csv::parse_number("1,5", "t"), ValueError);
}

TEST(Ingest, RoundTripSimulated) {
    auto cfg = sim::SeedConfig::defaults();
    cfg.n_securities = 12;
    cfg.n_days = 40;
    const auto ds = sim::simulate_universe(cfg);
    TempDir dir;
    csv::export_dir(ds, dir.path());
    const auto back = csv::ingest_dir(dir.path());
    EXPECT_EQ(back, ds);
}

TEST(Export, IdenticalBytesAndRowCount) {
    const auto ds = sim::simulate_universe(sim::SeedConfig::defaults());
    const auto a = csv::observations_to_string(ds);
    EXPECT_EQ(a, csv::observations_to_string(ds));
    std::size_t lines = 0;
    for (char c : a) lines += c == '\n';
    EXPECT_EQ(lines, 25301u);
    EXPECT_EQ(a.substr(0, kObsHeader.size()), kObsHeader);

    TempDir d1, d2;
    csv::export_dir(ds, d1.path());
    csv::export_dir(csv::ingest_dir(d1.path()), d2.path());
    EXPECT_EQ(csv::read_file(d1 / "observations.csv"), csv::read_file(d2 / "observations.csv"));
    EXPECT_EQ(csv::read_file(d1 / "profiles.csv"), csv::read_file(d2 / "profiles.csv"));
    EXPECT_FALSE(std::filesystem::exists(d1 / "observations.csv.tmp"));
}

TEST(Export, SingleObservationIsTwoLines) {
    Dataset ds;
    ds.series.push_back(bounce::testing::flat_series("AAA", 1));
    ds.profiles.push_back(bounce::testing::profile("AAA"));
    const auto text = csv::observations_to_string(ds);
    EXPECT_EQ(text, kObsHeader + "\n2021-03-01,AAA,50,100000,1000000,200000,5000000,0.05,0.06\n");
}

TEST(Ingest, HeaderOnlyIsEmpty) {
    TempDir dir;
    write_text(dir / "observations.csv", kObsHeader + "\n");
    write_text(dir / "profiles.csv", kProfHeader + "\n");
    const auto ds = csv::ingest_dir(dir.path());
    EXPECT_TRUE(ds.series.empty());
    EXPECT_TRUE(ds.profiles.empty());
}

TEST(Ingest, AltBelowLoanRateNamesRow) {
    TempDir dir;
    write_text(dir / "observations.csv",
               kObsHeader + "\n"
                            "2021-03-01,AAA,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-02,AAA,50,100,1000,200,5000,0.05,0.04\n");
    write_text(dir / "profiles.csv", kProfHeader + "\nAAA,JP,3,1.1\n");
    const auto msg = message_of([&] { csv::ingest_dir(dir.path()); });
    EXPECT_NE(msg.find("observations.csv line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("alt_loan_rate"), std::string::npos) << msg;
    EXPECT_THROW(csv::ingest_dir(dir.path()), ValueError);
}

TEST(Ingest, SchemaErrors) {
    TempDir dir;
    write_text(dir / "profiles.csv", kProfHeader + "\n");
    write_text(dir / "observations.csv", "date,security_id,price\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), SchemaError);
    write_text(dir / "observations.csv", kObsHeader + "\n2021-03-01,AAA,50\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), SchemaError);
    write_text(dir / "observations.csv", "");
    EXPECT_THROW(csv::ingest_dir(dir.path()), SchemaError);
}

TEST(Ingest, OrderAndGapErrors) {
    TempDir dir;
    write_text(dir / "profiles.csv", kProfHeader + "\nAAA,JP,3,1.1\nBBB,JP,3,1.1\n");
    write_text(dir / "observations.csv",
               kObsHeader + "\n"
                            "2021-03-02,AAA,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-01,AAA,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-01,BBB,50,100,1000,200,5000,0.05,0.06\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), OrderError);

    // BBB skips 2021-03-02, which AAA trades.
    write_text(dir / "observations.csv",
               kObsHeader + "\n"
                            "2021-03-01,AAA,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-02,AAA,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-03,AAA,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-01,BBB,50,100,1000,200,5000,0.05,0.06\n"
                            "2021-03-03,BBB,50,100,1000,200,5000,0.05,0.06\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), GapError);
}

TEST(Ingest, ValueErrors) {
    TempDir dir;
    write_text(dir / "profiles.csv", kProfHeader + "\nAAA,JP,3,1.1\n");
    for (const char* row : {"2021-03-01,AAA,-50,100,1000,200,5000,0.05,0.06",
                            "2021-03-01,AAA,50,-1,1000,200,5000,0.05,0.06",
                            "2021-03-01,AAA,50,100,1000,200,5000,-0.05,0.06",
                            "2021-13-01,AAA,50,100,1000,200,5000,0.05,0.06",
                            "2021-03-01,AAA,50,abc,1000,200,5000,0.05,0.06"}) {
        write_text(dir / "observations.csv", kObsHeader + "\n" + row + "\n");
        EXPECT_THROW(csv::ingest_dir(dir.path()), ValueError) << row;
    }
}

TEST(Ingest, ProfilesMustJoin) {
    TempDir dir;
    write_text(dir / "observations.csv",
               kObsHeader + "\n2021-03-01,AAA,50,100,1000,200,5000,0.05,0.06\n");
    write_text(dir / "profiles.csv", kProfHeader + "\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), ValueError);
    write_text(dir / "profiles.csv", kProfHeader + "\nAAA,JP,3,1.1\nZZZ,JP,3,1.1\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), ValueError);
    write_text(dir / "profiles.csv", kProfHeader + "\nAAA,JP,3,1.1\nAAA,HK,3,1.1\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), ValueError);
    write_text(dir / "profiles.csv", kProfHeader + "\nAAA,JP,7,1.1\n");
    EXPECT_THROW(csv::ingest_dir(dir.path()), ValueError);
}

TEST(Ingest, RowCountConserved) {
    TempDir dir;
    std::string obs = kObsHeader + "\n";
    Date d{2021, 3, 1};
    for (int i = 0; i < 30; ++i, d = d.next_weekday()) {
        for (const char* id : {"AAA", "BBB"}) {
            obs += d.to_string() + "," + id + ",50,100,1000,200,5000,0.05,0.06\n";
        }
    }
    write_text(dir / "observations.csv", obs);
    write_text(dir / "profiles.csv", kProfHeader + "\nBBB,JP,3,1.1\nAAA,JP,3,1.1\n");
    const auto ds = csv::ingest_dir(dir.path());
    EXPECT_EQ(ds.observation_count(), 60u);
    EXPECT_EQ(ds.profiles.front().security_id, "AAA");
}

TEST(Ingest, MissingFileIsIoError) {
    TempDir dir;
    EXPECT_THROW(csv::ingest_dir(dir.path()), IoError);
}

TEST(IdList, ReadsOneColumn) {
    TempDir dir;
    write_text(dir / "ex.csv", "security_id\nAAA\n\nBBB\n");
    EXPECT_EQ(csv::read_id_list(dir / "ex.csv"), (std::vector<std::string>{"AAA", "BBB"}));
    write_text(dir / "bad.csv", "id\nAAA\n");
    EXPECT_THROW(csv::read_id_list(dir / "bad.csv"), SchemaError);
}

TEST(Validate, DirectChecks) {
    Dataset ds;
    ds.series.push_back(bounce::testing::flat_series("BBB", 3));
    ds.series.push_back(bounce::testing::flat_series("AAA", 3));
    ds.profiles = {bounce::testing::profile("AAA"), bounce::testing::profile("BBB")};
    EXPECT_THROW(validate(ds), OrderError);
    canonicalize(ds);
    EXPECT_NO_THROW(validate(ds));
    ds.series[0].observations[1].volume = std::nan("");
    EXPECT_THROW(validate(ds), ValueError);
}

}  // namespace
