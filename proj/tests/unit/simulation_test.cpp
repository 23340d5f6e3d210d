#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"
#include "bounce/simulation.hpp"

namespace {

using namespace bounce;
using namespace bounce::sim;

SimulationSeedRange price_range(Interval start, Interval drift, Interval vol) {
    return {Variable::price, start, drift, vol};
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

TEST(DrawParams, DegenerateIntervalIsExact) {
    NoiseStream s(1, {});
    const auto p = draw_params(price_range({100, 100}, {0.05, 0.05}, {0.2, 0.2}), s);
    const auto& g = std::get<GbmParams>(p);
    EXPECT_EQ(g.s0, 100.0);
    EXPECT_EQ(g.mu, 0.05);
    EXPECT_EQ(g.sigma, 0.2);
}

TEST(DrawParams, UniformStartMean) {
    NoiseStream s(2, {});
    const auto range = price_range({10, 500}, {0, 0.1}, {0.15, 0.35});
    std::vector<double> starts;
    for (int i = 0; i < 10000; ++i) {
        const auto g = std::get<GbmParams>(draw_params(range, s));
        starts.push_back(g.s0);
        ASSERT_GE(g.sigma, 0.15);
        ASSERT_LE(g.sigma, 0.35);
    }
    const double se = (490.0 / std::sqrt(12.0)) / std::sqrt(10000.0);
    EXPECT_LT(std::fabs(mean_of(starts) - 255.0), 3.0 * se);
}

TEST(DrawParams, LoanBalanceIsFoldedNormal) {
    NoiseStream s(3, {});
    SimulationSeedRange r{Variable::loan_balance, {1, 2}, {5, 5}, {2, 2}};
    const auto p = draw_params(r, s);
    ASSERT_TRUE(std::holds_alternative<FoldedNormalParams>(p));
    EXPECT_EQ(std::get<FoldedNormalParams>(p).mu, 5.0);
    EXPECT_EQ(std::get<FoldedNormalParams>(p).sigma, 2.0);
}

TEST(SeedRange, RejectsInvertedBounds) {
    EXPECT_THROW(price_range({5, 1}, {0, 0}, {0, 0}).validate(), InvalidSeedRange);
    EXPECT_THROW(price_range({1, 5}, {0, 0}, {-0.1, 0.2}).validate(), InvalidSeedRange);
    EXPECT_THROW(price_range({0, 5}, {0, 0}, {0.1, 0.2}).validate(), InvalidSeedRange);
}

TEST(SimulateGbm, DeterministicLimit) {
    NoiseStream s(4, {});
    const auto path = simulate_gbm({100.0, 0.10, 0.0}, 253, 1.0 / 252.0, s);
    ASSERT_EQ(path.size(), 253u);
    EXPECT_EQ(path.front(), 100.0);
    const double expected = 100.0 * std::exp(0.10);
    EXPECT_LT(std::fabs(path.back() - expected) / expected, 1e-9);
}

TEST(SimulateGbm, ItoDriftCorrection) {
    const int n_paths = 10000;
    std::vector<double> log_returns;
    log_returns.reserve(n_paths);
    for (int i = 0; i < n_paths; ++i) {
        NoiseStream s(5, {static_cast<std::uint32_t>(i), 0, 1});
        const auto path = simulate_gbm({1.0, 0.0, 0.2}, 253, 1.0 / 252.0, s);
        log_returns.push_back(std::log(path.back() / path.front()));
    }
    const double se = stddev_of(log_returns) / std::sqrt(double(n_paths));
    EXPECT_LT(std::fabs(mean_of(log_returns) - (-0.02)), 3.0 * se);
    // Realized annualized volatility of the terminal log return.
    EXPECT_NEAR(stddev_of(log_returns), 0.2, 0.2 * 0.02);
}

TEST(SimulateGbm, AlwaysPositive) {
    NoiseStream s(6, {});
    for (double x : simulate_gbm({0.01, -2.0, 3.0}, 2000, 1.0 / 252.0, s)) ASSERT_GT(x, 0.0);
}

TEST(SimulateAbsNormal, ZeroSigmaIsAbsoluteMean) {
    NoiseStream s(7, {});
    for (double x : simulate_abs_normal({-5.0, 0.0}, 50, s)) ASSERT_EQ(x, 5.0);
}

TEST(SimulateAbsNormal, FoldedMean) {
    NoiseStream s(8, {});
    const auto draws = simulate_abs_normal({0.0, 1.0}, 100000, s);
    for (double x : draws) ASSERT_GE(x, 0.0);
    const double se = stddev_of(draws) / std::sqrt(double(draws.size()));
    EXPECT_LT(std::fabs(mean_of(draws) - std::sqrt(2.0 / std::numbers::pi)), 3.0 * se);
}

TEST(SeedConfig, MissingVariableRange) {
    auto cfg = SeedConfig::defaults();
    cfg.ranges.pop_back();
    EXPECT_THROW(cfg.validate(), MissingVariableRange);
    EXPECT_THROW(simulate_universe(cfg), MissingVariableRange);
}

TEST(SeedConfig, DefaultsRespectVolatilityOrdering) {
    const auto cfg = SeedConfig::defaults();
    cfg.validate();
    const double price_rate_max = std::max({cfg.range_for(Variable::price).vol.max,
                                            cfg.range_for(Variable::loan_rate).vol.max,
                                            cfg.range_for(Variable::alt_loan_rate).vol.max});
    for (Variable v : {Variable::availability, Variable::short_interest, Variable::volume}) {
        EXPECT_GT(cfg.range_for(v).vol.min, price_rate_max) << to_string(v);
    }
}

TEST(TradingCalendar, SkipsWeekends) {
    const auto days = trading_calendar(Date{2020, 1, 4}, 6);  // a Saturday
    ASSERT_EQ(days.size(), 6u);
    EXPECT_EQ(days.front().to_string(), "2020-01-06");
    EXPECT_EQ(days.back().to_string(), "2020-01-13");
    for (const auto& d : days) EXPECT_TRUE(d.is_weekday());
}

TEST(SimulateUniverse, DefaultShapeAndPositivity) {
    const auto cfg = SeedConfig::defaults();
    const auto ds = simulate_universe(cfg);
    ASSERT_EQ(ds.series.size(), 100u);
    ASSERT_EQ(ds.profiles.size(), 100u);
    EXPECT_EQ(ds.observation_count(), 25300u);
    EXPECT_NO_THROW(validate(ds));
    for (const auto& s : ds.series) {
        ASSERT_EQ(s.size(), 253u);
        for (const auto& o : s.observations) {
            ASSERT_GT(o.price, 0.0);
            ASSERT_GT(o.availability, 0.0);
            ASSERT_GT(o.short_interest, 0.0);
            ASSERT_GT(o.volume, 0.0);
            ASSERT_GE(o.loan_balance, 0.0);
            ASSERT_GT(o.loan_rate, 0.0);
            ASSERT_GE(o.alt_loan_rate, o.loan_rate);
        }
    }
    for (const auto& p : ds.profiles) {
        EXPECT_GE(p.buy_rating, 1.0);
        EXPECT_LE(p.buy_rating, 5.0);
        EXPECT_GE(p.beta, cfg.beta.min);
        EXPECT_LE(p.beta, cfg.beta.max);
    }
}

TEST(SimulateUniverse, SameSeedSameBytes) {
    auto cfg = SeedConfig::defaults();
    cfg.n_securities = 20;
    const auto a = simulate_universe(cfg);
    const auto b = simulate_universe(cfg);
    EXPECT_EQ(a, b);
    EXPECT_EQ(csv::observations_to_string(a), csv::observations_to_string(b));
    cfg.master_seed = 43;
    EXPECT_NE(simulate_universe(cfg), a);
}

TEST(SimulateUniverse, ThreadCountDoesNotMatter) {
    auto cfg = SeedConfig::defaults();
    cfg.n_securities = 37;
    const auto one = simulate_universe(cfg, 1);
    EXPECT_EQ(simulate_universe(cfg, 3), one);
    EXPECT_EQ(simulate_universe(cfg, 8), one);
}

TEST(SimulateUniverse, PrefixStable) {
    // A security's draws depend only on its index, not on the universe size.
    auto cfg = SeedConfig::defaults();
    cfg.n_securities = 10;
    const auto small = simulate_universe(cfg);
    cfg.n_securities = 50;
    const auto large = simulate_universe(cfg);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(small.series[i].observations.back().price,
                  large.series[i].observations.back().price);
    }
}

TEST(SimulateUniverse, SingleDayEqualsDrawnStart) {
    auto cfg = SeedConfig::defaults();
    cfg.n_securities = 1;
    cfg.n_days = 1;
    const auto ds = simulate_universe(cfg);
    ASSERT_EQ(ds.observation_count(), 1u);
    const auto calendar = trading_calendar(cfg.start_date, 1);
    SecurityDraw draw;
    simulate_security(cfg, 0, calendar, &draw);
    const auto& o = ds.series[0].observations[0];
    auto s0 = [&](Variable v) { return std::get<GbmParams>(draw.params[std::size_t(v)]).s0; };
    EXPECT_EQ(o.price, s0(Variable::price));
    EXPECT_EQ(o.availability, s0(Variable::availability));
    EXPECT_EQ(o.short_interest, s0(Variable::short_interest));
    EXPECT_EQ(o.volume, s0(Variable::volume));
    EXPECT_EQ(o.loan_rate, s0(Variable::loan_rate));
    EXPECT_EQ(o.alt_loan_rate, s0(Variable::loan_rate) + s0(Variable::alt_loan_rate));
    EXPECT_GE(o.loan_balance, 0.0);
}

// Pooled over 1000 securities, realized log drift and variance of every GBM
// channel match the values implied by uniform parameter draws, and the
// folded-normal loan balance matches its closed-form mean.
TEST(SimulateUniverse, MomentRecoveryAcrossSeedRanges) {
    auto cfg = SeedConfig::defaults();
    cfg.n_securities = 1000;
    const auto calendar = trading_calendar(cfg.start_date, cfg.n_days);
    const double dt = cfg.dt;

    struct Acc {
        std::vector<double> drift, var, start;
    };
    std::array<Acc, kVariableCount> acc;
    std::vector<double> lb_residual;

    for (std::size_t i = 0; i < cfg.n_securities; ++i) {
        SecurityDraw draw;
        const auto s = simulate_security(cfg, i, calendar, &draw);
        for (Variable v : kAllVariables) {
            if (v == Variable::loan_balance) continue;
            std::vector<double> level;
            for (const auto& o : s.observations) {
                switch (v) {
                    case Variable::price: level.push_back(o.price); break;
                    case Variable::availability: level.push_back(o.availability); break;
                    case Variable::short_interest: level.push_back(o.short_interest); break;
                    case Variable::volume: level.push_back(o.volume); break;
                    case Variable::loan_rate: level.push_back(o.loan_rate); break;
                    case Variable::alt_loan_rate: level.push_back(o.alt_loan_rate - o.loan_rate); break;
                    default: break;
                }
            }
            std::vector<double> inc;
            for (std::size_t t = 1; t < level.size(); ++t) inc.push_back(std::log(level[t] / level[t - 1]));
            auto& a = acc[std::size_t(v)];
            a.drift.push_back(mean_of(inc) / dt);
            a.var.push_back(stddev_of(inc) * stddev_of(inc) / dt);
            a.start.push_back(level.front());
        }
        const auto fp = std::get<FoldedNormalParams>(draw.params[std::size_t(Variable::loan_balance)]);
        const double z = fp.mu / fp.sigma;
        const double folded_mean = fp.sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * z * z) +
                                   fp.mu * std::erf(z / std::sqrt(2.0));
        std::vector<double> lb;
        for (const auto& o : s.observations) lb.push_back(o.loan_balance);
        lb_residual.push_back(mean_of(lb) - folded_mean);
    }

    for (Variable v : kAllVariables) {
        if (v == Variable::loan_balance) continue;
        const auto& r = cfg.range_for(v);
        const auto& a = acc[std::size_t(v)];
        const double n = double(a.drift.size());
        const double e_sigma2 = std::pow(r.vol.max - r.vol.min, 2) / 12.0 + r.vol.midpoint() * r.vol.midpoint();
        const double e_drift = r.drift.midpoint() - 0.5 * e_sigma2;
        EXPECT_LT(std::fabs(mean_of(a.drift) - e_drift), 3.0 * stddev_of(a.drift) / std::sqrt(n))
            << to_string(v) << " drift";
        EXPECT_LT(std::fabs(mean_of(a.var) - e_sigma2), 3.0 * stddev_of(a.var) / std::sqrt(n))
            << to_string(v) << " variance";
        EXPECT_LT(std::fabs(mean_of(a.start) - r.start.midpoint()), 3.0 * stddev_of(a.start) / std::sqrt(n))
            << to_string(v) << " start";
    }
    EXPECT_LT(std::fabs(mean_of(lb_residual)), 3.0 * stddev_of(lb_residual) / std::sqrt(double(lb_residual.size())));
}

}  // namespace
