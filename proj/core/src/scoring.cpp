#include "bounce/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"
#include "parallel.hpp"

namespace bounce::scoring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Window {
    std::size_t first = 0;
    std::size_t last = 0;  // exclusive
    std::size_t size() const { return last - first; }
};

// Trailing window of up to `len` points ending at `idx`, or for first_day a
// forward window starting at `idx`.
Window window_at(std::size_t n, std::size_t idx, std::size_t len, Flavor flavor) {
    if (flavor == Flavor::first_day) return {idx, std::min(n, idx + len)};
    return {idx + 1 >= len ? idx + 1 - len : 0, idx + 1};
}

template <typename Get>
std::vector<double> column(const SecuritySeries& s, Window w, Get get) {
    std::vector<double> out;
    out.reserve(w.size());
    for (std::size_t t = w.first; t < w.last; ++t) out.push_back(get(s.observations[t]));
    return out;
}

// Accumulates offsets from the first value, so a constant window averages
// to that value exactly and its deviations are exactly zero.
double mean(std::span<const double> v) {
    const double origin = v.front();
    double offset = 0.0;
    for (double x : v) offset += x - origin;
    return origin + offset / static_cast<double>(v.size());
}

double rate_of(const LendingObservation& o, RateSource src) {
    return src == RateSource::loan_rate ? o.loan_rate : o.alt_loan_rate;
}

std::size_t eval_index(const SecuritySeries& s, Flavor flavor) {
    return flavor == Flavor::first_day ? 0 : s.size() - 1;
}

// Fills everything except sigma_lr / e_lr, which come from rate_stats.
DerivedFactors level_factors(const SecuritySeries& s, const ScoreConfig& cfg, Flavor flavor,
                             std::size_t idx, double& loan_view, double& alt_view) {
    const std::size_t n = s.size();
    const auto& today = s.observations[idx];
    DerivedFactors f;
    if (flavor == Flavor::ma) {
        const Window w = window_at(n, idx, cfg.ma_window, Flavor::ma);
        f.ma_si = mean(column(s, w, [](const auto& o) { return o.short_interest; }));
        f.ma_la = mean(column(s, w, [](const auto& o) { return o.availability; }));
        f.adv = mean(column(s, w, [](const auto& o) { return o.volume; }));
        loan_view = mean(column(s, w, [](const auto& o) { return o.loan_rate; }));
        alt_view = mean(column(s, w, [](const auto& o) { return o.alt_loan_rate; }));
    } else {
        f.ma_si = today.short_interest;
        f.ma_la = today.availability;
        f.adv = today.volume;
        loan_view = today.loan_rate;
        alt_view = today.alt_loan_rate;
    }
    f.si_usd = f.ma_si * today.price;
    f.la_usd = f.ma_la * today.price;
    f.dtc = days_to_cover(f.ma_si, f.adv).value_or(kNaN);

    std::size_t lb_from = 0, lb_to = idx;
    if (flavor == Flavor::first_day) {
        lb_to = std::min(n - 1, idx + cfg.lbg_lag);
        lb_from = idx;
    } else {
        lb_from = idx >= cfg.lbg_lag ? idx - cfg.lbg_lag : 0;
    }
    f.lb_start = s.observations[lb_from].loan_balance;
    f.lb_end = s.observations[lb_to].loan_balance;
    f.lbg = f.lb_start > 0.0 ? f.lb_end / f.lb_start : kNaN;

    const Window lw = window_at(n, idx, cfg.adv_window, flavor);
    f.adv20 = mean(column(s, lw, [](const auto& o) { return o.volume; }));
    return f;
}

}  // namespace

std::string_view to_string(Flavor f) {
    switch (f) {
        case Flavor::ma: return "ma";
        case Flavor::first_day: return "first-day";
        case Flavor::last_day: return "last-day";
    }
    return "?";
}

std::optional<Flavor> parse_flavor(std::string_view text) {
    if (text == "ma") return Flavor::ma;
    if (text == "first-day" || text == "first_day") return Flavor::first_day;
    if (text == "last-day" || text == "last_day") return Flavor::last_day;
    return std::nullopt;
}

std::string_view to_string(RateSource r) {
    return r == RateSource::loan_rate ? "loan_rate" : "alt_loan_rate";
}

std::optional<RateSource> parse_rate_source(std::string_view text) {
    if (text == "loan_rate") return RateSource::loan_rate;
    if (text == "alt_loan_rate") return RateSource::alt_loan_rate;
    return std::nullopt;
}

std::string_view to_string(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::none: return "";
        case ExclusionReason::insufficient_history: return "insufficient_history";
        case ExclusionReason::zero_availability: return "zero_availability";
        case ExclusionReason::zero_volume: return "zero_volume";
        case ExclusionReason::zero_loan_balance: return "zero_loan_balance";
    }
    return "?";
}

std::optional<ExclusionReason> parse_exclusion_reason(std::string_view text) {
    for (auto r : {ExclusionReason::none, ExclusionReason::insufficient_history,
                   ExclusionReason::zero_availability, ExclusionReason::zero_volume,
                   ExclusionReason::zero_loan_balance}) {
        if (to_string(r) == text) return r;
    }
    return std::nullopt;
}

void ScoreConfig::validate() const {
    if (ma_window < 2 || vol_window < 2 || lbg_lag < 2 || adv_window < 2) {
        throw ConfigError("score windows must all be >= 2");
    }
    if (!std::isfinite(rf)) throw ConfigError("rf must be finite");
}

int ShortScoreRow::premium_sign() const {
    if (std::isnan(score_one)) return 0;
    return (score_one > 0.0) - (score_one < 0.0);
}

double ShortScoreRow::score(int which) const {
    switch (which) {
        case 1: return score_one;
        case 2: return score_two;
        case 3: return score_three;
        case 4: return score_four;
        default: throw ConfigError("score selector must be 1..4");
    }
}

double moving_average(std::span<const double> series, std::size_t window) {
    if (series.empty()) throw EmptySeries("moving average of an empty series");
    if (window == 0) throw ConfigError("moving average window must be positive");
    const std::size_t k = std::min(window, series.size());
    return mean(series.subspan(series.size() - k));
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) throw InsufficientHistory("standard deviation needs two values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double sharpe_like(double e_x, double threshold, double sigma_x) {
    const double premium = e_x - threshold;
    if (sigma_x == 0.0) {
        if (premium > 0.0) return kInf;
        if (premium < 0.0) return -kInf;
        return 0.0;
    }
    return premium / sigma_x;
}

double scale_score(double multiplier, double score) {
    if (multiplier == 0.0) return 0.0;
    return multiplier * score;
}

double score_one(const DerivedFactors& f, const ScoreConfig& cfg) {
    return sharpe_like(f.e_lr, cfg.rf, f.sigma_lr);
}

std::optional<double> score_two(const DerivedFactors& f, const ScoreConfig& cfg) {
    if (f.ma_la == 0.0) return std::nullopt;
    return scale_score(f.ma_si / f.ma_la, score_one(f, cfg));
}

std::optional<double> days_to_cover(double short_interest_shares, double adv_shares) {
    if (adv_shares == 0.0) return std::nullopt;
    return short_interest_shares / adv_shares;
}

std::optional<double> score_three(const DerivedFactors& f, const ScoreConfig& cfg) {
    const auto dtc = days_to_cover(f.ma_si, f.adv);
    const auto two = score_two(f, cfg);
    if (!dtc || !two) return std::nullopt;
    return scale_score(*dtc, *two);
}

std::optional<double> score_four(const DerivedFactors& f, const ScoreConfig& cfg) {
    const auto three = score_three(f, cfg);
    if (f.lb_start == 0.0 || !three) return std::nullopt;
    return scale_score(f.lb_end / f.lb_start, *three);
}

RateStats rate_stats(const SecuritySeries& series, const ScoreConfig& cfg, Flavor flavor,
                     std::size_t as_of) {
    if (series.empty()) throw EmptySeries("rate statistics of an empty series");
    if (as_of >= series.size()) throw InsufficientHistory("evaluation index outside series");
    const auto src = cfg.rate_source;
    const auto rate = [src](const LendingObservation& o) { return rate_of(o, src); };
    const Window vw = window_at(series.size(), as_of, cfg.vol_window, flavor);
    if (vw.size() < 2) {
        throw InsufficientHistory(series.security_id + ": " + std::to_string(vw.size()) +
                                  " rate observation(s) in the volatility window");
    }
    RateStats stats;
    stats.sigma_lr = sample_stddev(column(series, vw, rate));
    if (flavor == Flavor::ma) {
        stats.e_lr = mean(column(series, window_at(series.size(), as_of, cfg.ma_window, flavor), rate));
    } else {
        stats.e_lr = rate(series.observations[as_of]);
    }
    return stats;
}

DerivedFactors derive_factors(const SecuritySeries& series, const ScoreConfig& cfg, Flavor flavor) {
    if (series.empty()) throw EmptySeries("cannot score an empty series");
    const std::size_t idx = eval_index(series, flavor);
    double loan_view = 0.0, alt_view = 0.0;
    DerivedFactors f = level_factors(series, cfg, flavor, idx, loan_view, alt_view);
    const RateStats rs = rate_stats(series, cfg, flavor, idx);
    f.e_lr = rs.e_lr;
    f.sigma_lr = rs.sigma_lr;
    return f;
}

ShortScoreRow score_series(const SecuritySeries& series, const ScoreConfig& cfg, Flavor flavor) {
    if (series.empty()) throw EmptySeries("cannot score an empty series");
    const std::size_t idx = eval_index(series, flavor);
    ShortScoreRow row;
    row.date = series.observations[idx].date;
    row.security_id = series.security_id;
    row.flavor = flavor;
    row.price = series.observations[idx].price;
    row.factors = level_factors(series, cfg, flavor, idx, row.loan_rate, row.alt_loan_rate);
    row.score_one = row.score_two = row.score_three = row.score_four = kNaN;

    try {
        const RateStats rs = rate_stats(series, cfg, flavor, idx);
        row.factors.e_lr = rs.e_lr;
        row.factors.sigma_lr = rs.sigma_lr;
    } catch (const InsufficientHistory&) {
        row.factors.e_lr = row.factors.sigma_lr = kNaN;
        row.excluded = true;
        row.reason = ExclusionReason::insufficient_history;
        return row;
    }

    const auto& f = row.factors;
    row.score_one = score_one(f, cfg);
    if (auto s = score_two(f, cfg)) {
        row.score_two = *s;
    } else {
        row.excluded = true;
        row.reason = ExclusionReason::zero_availability;
        return row;
    }
    if (auto s = score_three(f, cfg)) {
        row.score_three = *s;
    } else {
        row.excluded = true;
        row.reason = ExclusionReason::zero_volume;
        return row;
    }
    if (auto s = score_four(f, cfg)) {
        row.score_four = *s;
    } else {
        row.excluded = true;
        row.reason = ExclusionReason::zero_loan_balance;
    }
    return row;
}

std::vector<ShortScoreRow> score_table(const Dataset& dataset, const ScoreConfig& cfg,
                                       Flavor flavor, unsigned threads) {
    cfg.validate();
    std::vector<const SecuritySeries*> inputs;
    for (const auto& s : dataset.series) {
        if (!s.empty()) inputs.push_back(&s);
    }
    std::sort(inputs.begin(), inputs.end(),
              [](const auto* a, const auto* b) { return a->security_id < b->security_id; });
    std::vector<ShortScoreRow> rows(inputs.size());
    detail::parallel_for(inputs.size(), threads,
                         [&](std::size_t i) { rows[i] = score_series(*inputs[i], cfg, flavor); });
    return rows;
}

void FactorWeights::validate() const {
    for (double w : {w_si, w_lr, w_dtc, w_lbg, w_ila, w_rate_vol}) {
        if (!std::isfinite(w)) throw InvalidWeights("factor weights must be finite");
    }
    if (std::fabs(sum() - 1.0) > 1e-9) {
        throw InvalidWeights("factor weights sum to " + csv::format_number(sum()) + ", expected 1");
    }
}

std::vector<double> weighted_score(std::span<const DerivedFactors> factors,
                                   const FactorWeights& weights) {
    weights.validate();
    const std::size_t n = factors.size();
    std::vector<double> total(n, 0.0);
    if (n == 0) return total;

    struct Term {
        const char* name;
        double weight;
        double (*get)(const DerivedFactors&);
    };
    const Term terms[] = {
        {"si_usd", weights.w_si, [](const DerivedFactors& f) { return f.si_usd; }},
        {"e_lr", weights.w_lr, [](const DerivedFactors& f) { return f.e_lr; }},
        {"dtc", weights.w_dtc, [](const DerivedFactors& f) { return f.dtc; }},
        {"lbg", weights.w_lbg, [](const DerivedFactors& f) { return f.lbg; }},
        {"ila", weights.w_ila, [](const DerivedFactors& f) { return 1.0 / f.la_usd; }},
        {"rate_vol", weights.w_rate_vol, [](const DerivedFactors& f) { return -f.sigma_lr; }},
    };
    std::vector<double> values(n);
    for (const auto& term : terms) {
        if (term.weight == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = term.get(factors[i]);
            if (!std::isfinite(values[i])) {
                throw ValueError(std::string("factor ") + term.name + " is not finite for row " +
                                 std::to_string(i));
            }
        }
        if (n < 2) throw DegenerateCrossSection(std::string("factor ") + term.name +
                                                " needs at least two securities");
        const double m = mean(values);
        const double sd = sample_stddev(values);
        if (sd == 0.0) {
            throw DegenerateCrossSection(std::string("factor ") + term.name +
                                         " has zero cross-sectional dispersion");
        }
        for (std::size_t i = 0; i < n; ++i) total[i] += term.weight * (values[i] - m) / sd;
    }
    return total;
}

std::string score_table_to_csv(std::span<const ShortScoreRow> rows) {
    using csv::format_number;
    std::string out(kScoreTableHeader);
    out += '\n';
    for (const auto& r : rows) {
        const auto& f = r.factors;
        out += r.date.to_string();
        out += ',';
        out += r.security_id;
        for (double v : {r.price, f.ma_la, f.ma_si, f.adv, r.loan_rate, r.alt_loan_rate, f.sigma_lr,
                         f.lb_start, f.lb_end, r.score_one, r.score_two, r.score_three,
                         r.score_four}) {
            out += ',';
            out += format_number(v);
        }
        out += r.excluded ? ",1," : ",0,";
        out += to_string(r.reason);
        out += '\n';
    }
    return out;
}

std::vector<ShortScoreRow> read_score_table(const std::filesystem::path& path, Flavor flavor) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string name = path.filename().string();
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw SchemaError(name + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kScoreTableHeader) {
        throw SchemaError(name + " line 1: header does not match the score-table layout");
    }
    std::vector<ShortScoreRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = name + " line " + std::to_string(line_no);
        const auto fields = csv::split_line(line);
        if (fields.size() != 17) {
            throw SchemaError(where + ": expected 17 fields, found " + std::to_string(fields.size()));
        }
        auto num = [&](std::size_t i) { return csv::parse_number(fields[i], where); };
        ShortScoreRow r;
        try {
            r.date = Date::parse(fields[0]);
        } catch (const ValueError& e) {
            throw ValueError(where + ": " + e.what());
        }
        r.security_id = std::string(fields[1]);
        r.flavor = flavor;
        r.price = num(2);
        auto& f = r.factors;
        f.ma_la = num(3);
        f.ma_si = num(4);
        f.adv = num(5);
        r.loan_rate = num(6);
        r.alt_loan_rate = num(7);
        f.sigma_lr = num(8);
        f.lb_start = num(9);
        f.lb_end = num(10);
        r.score_one = num(11);
        r.score_two = num(12);
        r.score_three = num(13);
        r.score_four = num(14);
        if (fields[15] != "0" && fields[15] != "1") {
            throw ValueError(where + ": excluded must be 0 or 1");
        }
        r.excluded = fields[15] == "1";
        const auto reason = parse_exclusion_reason(fields[16]);
        if (!reason) throw ValueError(where + ": unknown reason '" + std::string(fields[16]) + "'");
        r.reason = *reason;
        f.e_lr = kNaN;
        f.adv20 = kNaN;
        f.si_usd = f.ma_si * r.price;
        f.la_usd = f.ma_la * r.price;
        f.dtc = days_to_cover(f.ma_si, f.adv).value_or(kNaN);
        f.lbg = f.lb_start > 0.0 ? f.lb_end / f.lb_start : kNaN;
        rows.push_back(std::move(r));
    }
    return rows;
}

void attach_liquidity(std::vector<ShortScoreRow>& rows, const Dataset& dataset,
                      const ScoreConfig& cfg) {
    for (auto& r : rows) {
        const auto* s = dataset.find_series(r.security_id);
        if (!s) throw ValueError("score row for '" + r.security_id + "' has no series in the dataset");
        auto it = std::lower_bound(s->observations.begin(), s->observations.end(), r.date,
                                   [](const LendingObservation& o, const Date& d) { return o.date < d; });
        if (it == s->observations.end() || it->date != r.date) {
            throw ValueError("no observation for '" + r.security_id + "' on " + r.date.to_string());
        }
        const auto idx = static_cast<std::size_t>(it - s->observations.begin());
        const Window w = window_at(s->size(), idx, cfg.adv_window, r.flavor);
        r.factors.adv20 = mean(column(*s, w, [](const auto& o) { return o.volume; }));
    }
}

}  // namespace bounce::scoring
