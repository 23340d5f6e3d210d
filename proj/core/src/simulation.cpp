#include "bounce/simulation.hpp"

#include <cmath>
#include <cstdio>

#include "bounce/errors.hpp"
#include "parallel.hpp"

namespace bounce::sim {

namespace {

constexpr std::array<std::string_view, kVariableCount> kNames{
    "price", "availability", "short_interest", "volume", "loan_balance", "loan_rate",
    "alt_loan_rate"};

NoiseStream stream_for(const SeedConfig& config, std::size_t index, Variable v, Channel ch) {
    return NoiseStream(config.master_seed,
                       SubstreamId{static_cast<std::uint32_t>(index),
                                   static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(ch)});
}

bool valid_interval(const Interval& iv) {
    return std::isfinite(iv.min) && std::isfinite(iv.max) && iv.min <= iv.max;
}

}  // namespace

std::string_view to_string(Variable v) { return kNames[static_cast<std::size_t>(v)]; }

std::optional<Variable> parse_variable(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<Variable>(i);
    }
    return std::nullopt;
}

void SimulationSeedRange::validate() const {
    const std::string name(to_string(variable));
    if (!valid_interval(start)) throw InvalidSeedRange(name + ": start_min > start_max");
    if (!valid_interval(drift)) throw InvalidSeedRange(name + ": drift_min > drift_max");
    if (!valid_interval(vol) || vol.min < 0.0) {
        throw InvalidSeedRange(name + ": require 0 <= vol_min <= vol_max");
    }
    if (variable != Variable::loan_balance && start.min <= 0.0) {
        throw InvalidSeedRange(name + ": start_min must be positive for a GBM variable");
    }
}

VariableParams draw_params(const SimulationSeedRange& range, NoiseStream& stream) {
    if (range.variable == Variable::loan_balance) {
        FoldedNormalParams p;
        p.mu = stream.uniform(range.drift.min, range.drift.max);
        p.sigma = stream.uniform(range.vol.min, range.vol.max);
        return p;
    }
    GbmParams p;
    p.s0 = stream.uniform(range.start.min, range.start.max);
    p.mu = stream.uniform(range.drift.min, range.drift.max);
    p.sigma = stream.uniform(range.vol.min, range.vol.max);
    return p;
}

std::vector<double> simulate_gbm(const GbmParams& params, std::size_t n_days, double dt,
                                 NoiseStream& stream) {
    std::vector<double> path;
    path.reserve(n_days);
    if (n_days == 0) return path;
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double diffusion = params.sigma * std::sqrt(dt);
    // Accumulate in log space so the deterministic limit is exact up to one exp().
    double log_level = 0.0;
    path.push_back(params.s0);
    for (std::size_t t = 1; t < n_days; ++t) {
        log_level += drift + diffusion * stream.normal();
        path.push_back(params.s0 * std::exp(log_level));
    }
    return path;
}

std::vector<double> simulate_abs_normal(const FoldedNormalParams& params, std::size_t n_days,
                                        NoiseStream& stream) {
    std::vector<double> draws;
    draws.reserve(n_days);
    for (std::size_t t = 0; t < n_days; ++t) {
        draws.push_back(std::fabs(params.mu + params.sigma * stream.normal()));
    }
    return draws;
}

SeedConfig SeedConfig::defaults() {
    SeedConfig c;
    using V = Variable;
    c.ranges = {
        {V::price, {10.0, 500.0}, {-0.10, 0.15}, {0.15, 0.35}},
        {V::availability, {1.0e3, 2.0e4}, {-0.60, 0.60}, {0.50, 1.20}},
        {V::short_interest, {5.0e6, 6.0e7}, {-0.50, 0.80}, {0.40, 1.00}},
        {V::volume, {2.0e5, 2.0e6}, {-0.50, 0.50}, {0.50, 1.20}},
        {V::loan_balance, {1.0e6, 1.0e8}, {1.0e7, 1.0e8}, {1.0e7, 5.0e7}},
        {V::loan_rate, {0.005, 0.12}, {-0.20, 0.20}, {0.10, 0.30}},
        {V::alt_loan_rate, {0.0005, 0.01}, {-0.20, 0.20}, {0.10, 0.30}},
    };
    return c;
}

void SeedConfig::validate() const {
    for (Variable v : kAllVariables) {
        bool found = false;
        for (const auto& r : ranges) found = found || r.variable == v;
        if (!found) throw MissingVariableRange("no seed range for '" + std::string(to_string(v)) + "'");
    }
    for (const auto& r : ranges) r.validate();
    if (n_securities == 0) throw InvalidSeedRange("n_securities must be positive");
    if (n_days == 0) throw InvalidSeedRange("n_days must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidSeedRange("dt must be positive");
    if (!valid_interval(buy_rating) || buy_rating.min < 1.0 || buy_rating.max > 5.0) {
        throw InvalidSeedRange("buy_rating range must lie within [1, 5]");
    }
    if (!valid_interval(beta)) throw InvalidSeedRange("beta_min > beta_max");
    if (markets.empty()) throw InvalidSeedRange("at least one market code is required");
}

const SimulationSeedRange& SeedConfig::range_for(Variable v) const {
    for (const auto& r : ranges) {
        if (r.variable == v) return r;
    }
    throw MissingVariableRange("no seed range for '" + std::string(to_string(v)) + "'");
}

std::string security_id_for(std::size_t index, std::size_t n_securities) {
    int width = 3;
    for (std::size_t n = n_securities; n >= 1000; n /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof buf, "SEC%0*zu", width, index + 1);
    return buf;
}

std::vector<Date> trading_calendar(Date start, std::size_t n_days) {
    std::vector<Date> days;
    days.reserve(n_days);
    if (n_days == 0) return days;
    Date d = start.is_weekday() ? start : start.next_weekday();
    days.push_back(d);
    while (days.size() < n_days) {
        d = d.next_weekday();
        days.push_back(d);
    }
    return days;
}

SecuritySeries simulate_security(const SeedConfig& config, std::size_t index,
                                 const std::vector<Date>& calendar, SecurityDraw* draw_out) {
    const std::size_t n = calendar.size();
    std::array<std::vector<double>, kVariableCount> paths;
    SecurityDraw draw;
    for (Variable v : kAllVariables) {
        const auto k = static_cast<std::size_t>(v);
        auto param_stream = stream_for(config, index, v, Channel::params);
        auto path_stream = stream_for(config, index, v, Channel::path);
        draw.params[k] = draw_params(config.range_for(v), param_stream);
        if (const auto* g = std::get_if<GbmParams>(&draw.params[k])) {
            paths[k] = simulate_gbm(*g, n, config.dt, path_stream);
        } else {
            paths[k] = simulate_abs_normal(std::get<FoldedNormalParams>(draw.params[k]), n,
                                           path_stream);
        }
    }
    if (draw_out) *draw_out = draw;

    SecuritySeries series;
    series.security_id = security_id_for(index, config.n_securities);
    series.observations.reserve(n);
    auto at = [&](Variable v, std::size_t t) { return paths[static_cast<std::size_t>(v)][t]; };
    for (std::size_t t = 0; t < n; ++t) {
        LendingObservation o;
        o.date = calendar[t];
        o.security_id = series.security_id;
        o.price = at(Variable::price, t);
        o.availability = at(Variable::availability, t);
        o.short_interest = at(Variable::short_interest, t);
        o.volume = at(Variable::volume, t);
        o.loan_balance = at(Variable::loan_balance, t);
        o.loan_rate = at(Variable::loan_rate, t);
        // The alternate-rate channel simulates the desk's markup over the
        // sourcing rate, which keeps alt_loan_rate >= loan_rate on every day.
        o.alt_loan_rate = o.loan_rate + at(Variable::alt_loan_rate, t);
        series.observations.push_back(std::move(o));
    }
    return series;
}

SecurityProfile simulate_profile(const SeedConfig& config, std::size_t index) {
    NoiseStream stream(config.master_seed,
                       SubstreamId{static_cast<std::uint32_t>(index), 0,
                                   static_cast<std::uint16_t>(Channel::profile)});
    SecurityProfile p;
    p.security_id = security_id_for(index, config.n_securities);
    const auto m = static_cast<std::size_t>(stream.next_u64() % config.markets.size());
    p.market = config.markets[m];
    p.buy_rating = stream.uniform(config.buy_rating.min, config.buy_rating.max);
    p.beta = stream.uniform(config.beta.min, config.beta.max);
    return p;
}

Dataset simulate_universe(const SeedConfig& config, unsigned threads) {
    config.validate();
    const auto calendar = trading_calendar(config.start_date, config.n_days);
    Dataset dataset;
    dataset.series.resize(config.n_securities);
    dataset.profiles.resize(config.n_securities);
    detail::parallel_for(config.n_securities, threads, [&](std::size_t i) {
        dataset.series[i] = simulate_security(config, i, calendar);
        dataset.profiles[i] = simulate_profile(config, i);
    });
    return dataset;
}

}  // namespace bounce::sim
