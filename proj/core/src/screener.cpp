#include "bounce/screener.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"

namespace bounce::screen {

using scoring::ShortScoreRow;

FilterConfig FilterConfig::permissive() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    FilterConfig c;
    c.min_si_usd = -inf;
    c.min_loan_rate = -inf;
    c.min_dtc = -inf;
    c.min_lbg = -inf;
    c.max_la_usd = inf;
    c.min_adv_usd = -inf;
    c.min_buy_rating = -inf;
    c.min_beta = -inf;
    c.drop_bottom_pct = 0.0;
    return c;
}

void FilterConfig::validate() const {
    for (double t : {min_si_usd, min_loan_rate, min_dtc, min_lbg, max_la_usd, min_adv_usd,
                     min_buy_rating, min_beta}) {
        if (std::isnan(t)) throw ConfigError("filter thresholds must not be NaN");
    }
    if (!(drop_bottom_pct >= 0.0 && drop_bottom_pct < 100.0)) {
        throw ConfigError("drop_bottom_pct must lie in [0, 100)");
    }
    for (const auto& [market, scale] : market_scale) {
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw ConfigError("market scale for '" + market + "' must be positive");
        }
    }
}

double FilterConfig::usd_scale(const std::string& market) const {
    auto it = market_scale.find(market);
    return it == market_scale.end() ? 1.0 : it->second;
}

namespace {

// Returns the name of the first failed threshold filter, or empty when all pass.
std::string_view first_failure(const ShortScoreRow& row, const SecurityProfile& profile,
                               const FilterConfig& cfg) {
    const auto& f = row.factors;
    const double scale = cfg.usd_scale(profile.market);
    // Written as !(value passes) so NaN inputs fail.
    if (!(f.ma_si * row.price >= cfg.min_si_usd * scale)) return kMinSiUsd;
    if (!(row.loan_rate >= cfg.min_loan_rate)) return kMinLoanRate;
    if (!(f.dtc >= cfg.min_dtc)) return kMinDtc;
    if (!(f.lbg >= cfg.min_lbg)) return kMinLbg;
    if (!(f.ma_la * row.price <= cfg.max_la_usd * scale)) return kMaxLaUsd;
    if (!(f.adv20 * row.price >= cfg.min_adv_usd * scale)) return kMinAdvUsd;
    if (!(profile.buy_rating >= cfg.min_buy_rating)) return kMinBuyRating;
    if (!(profile.beta >= cfg.min_beta)) return kMinBeta;
    return {};
}

bool by_id(const ShortScoreRow& a, const ShortScoreRow& b) { return a.security_id < b.security_id; }

}  // namespace

FilterResult apply_filters(std::span<const ShortScoreRow> rows, const Dataset& profiles,
                           const FilterConfig& cfg) {
    cfg.validate();
    FilterResult out;
    for (const auto& row : rows) {
        if (row.excluded) {
            out.excluded.push_back({row, std::string(scoring::to_string(row.reason))});
            continue;
        }
        const SecurityProfile* profile = profiles.find_profile(row.security_id);
        if (!profile) {
            out.excluded.push_back({row, std::string(kMissingProfile)});
            continue;
        }
        if (cfg.exclusion_list.contains(row.security_id)) {
            out.excluded.push_back({row, std::string(kExclusionList)});
            continue;
        }
        if (auto failed = first_failure(row, *profile, cfg); !failed.empty()) {
            out.excluded.push_back({row, std::string(failed)});
            continue;
        }
        ScreenedRow kept{row, {}};
        for (auto name : kThresholdFilters) kept.passed.emplace_back(name);
        out.kept.push_back(std::move(kept));
    }
    std::sort(out.kept.begin(), out.kept.end(),
              [](const auto& a, const auto& b) { return by_id(a.row, b.row); });
    std::sort(out.excluded.begin(), out.excluded.end(),
              [](const auto& a, const auto& b) { return by_id(a.row, b.row); });
    return out;
}

std::vector<RankedSecurity> rank(std::span<const ScreenedRow> kept, int score_selector,
                                 double drop_bottom_pct) {
    if (score_selector < 1 || score_selector > 4) throw ConfigError("score selector must be 1..4");
    if (!(drop_bottom_pct >= 0.0 && drop_bottom_pct < 100.0)) {
        throw ConfigError("drop_bottom_pct must lie in [0, 100)");
    }
    std::vector<RankedSecurity> ranked;
    for (const auto& k : kept) {
        if (k.row.excluded) continue;
        const double score = k.row.score(score_selector);
        if (std::isnan(score)) {
            throw ValueError("row '" + k.row.security_id + "' has no value for the selected score");
        }
        RankedSecurity r;
        r.security_id = k.row.security_id;
        r.key = {k.row.premium_sign(), score};
        r.flavor = k.row.flavor;
        r.score_selector = score_selector;
        r.filter_trace = k.passed;
        ranked.push_back(std::move(r));
    }
    if (ranked.empty()) throw EmptyAfterFilters("no securities left to rank");

    std::sort(ranked.begin(), ranked.end(), [](const RankedSecurity& a, const RankedSecurity& b) {
        if (a.key.premium_sign != b.key.premium_sign) return a.key.premium_sign > b.key.premium_sign;
        if (a.key.score != b.key.score) return a.key.score > b.key.score;
        return a.security_id < b.security_id;
    });
    const double k = static_cast<double>(ranked.size());
    // The epsilon keeps exact products such as 10 * 20 / 100 from rounding up.
    const auto drop = static_cast<std::size_t>(std::ceil(k * drop_bottom_pct / 100.0 - 1e-9));
    ranked.resize(ranked.size() - std::min(drop, ranked.size()));
    if (ranked.empty()) throw EmptyAfterFilters("bottom-percentile removal left no securities");
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
    return ranked;
}

std::vector<RankedSecurity> rank(std::span<const ShortScoreRow> rows, int score_selector,
                                 double drop_bottom_pct) {
    std::vector<ScreenedRow> wrapped;
    wrapped.reserve(rows.size());
    for (const auto& r : rows) wrapped.push_back({r, {}});
    return rank(std::span<const ScreenedRow>(wrapped), score_selector, drop_bottom_pct);
}

std::map<std::string, double> rank_stability(std::span<const std::vector<RankedSecurity>> snapshots,
                                             std::size_t universe_size) {
    if (snapshots.size() < 2) throw InsufficientSnapshots("rank stability needs two snapshots");
    std::vector<std::map<std::string, std::size_t>> ranks(snapshots.size());
    std::set<std::string> universe;
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        for (const auto& r : snapshots[s]) {
            ranks[s][r.security_id] = r.rank;
            universe.insert(r.security_id);
        }
    }
    const double penalty =
        static_cast<double>(universe_size == 0 ? universe.size() : universe_size);
    std::map<std::string, double> churn;
    for (const auto& id : universe) {
        double total = 0.0;
        for (std::size_t s = 1; s < snapshots.size(); ++s) {
            auto prev = ranks[s - 1].find(id);
            auto next = ranks[s].find(id);
            if (prev == ranks[s - 1].end() || next == ranks[s].end()) {
                total += penalty;
            } else {
                total += std::fabs(static_cast<double>(prev->second) - static_cast<double>(next->second));
            }
        }
        churn[id] = total / static_cast<double>(snapshots.size() - 1);
    }
    return churn;
}

std::string ranking_to_csv(std::span<const RankedSecurity> ranking) {
    std::string out(kRankingHeader);
    out += '\n';
    for (const auto& r : ranking) {
        out += std::to_string(r.rank) + ',' + r.security_id + ',' + csv::format_number(r.key.score) + ',';
        for (std::size_t i = 0; i < r.filter_trace.size(); ++i) {
            if (i) out += ';';
            out += r.filter_trace[i];
        }
        out += '\n';
    }
    return out;
}

std::string excluded_to_csv(std::span<const ExcludedRow> excluded) {
    std::string out(kExcludedHeader);
    out += '\n';
    for (const auto& e : excluded) out += e.row.security_id + ',' + e.reason + '\n';
    return out;
}

std::vector<RankedSecurity> read_ranking(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string name = path.filename().string();
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(name + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRankingHeader) throw SchemaError(name + " line 1: expected '" + std::string(kRankingHeader) + "'");
    std::vector<RankedSecurity> ranking;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = name + " line " + std::to_string(line_no);
        const auto f = csv::split_line(line);
        if (f.size() != 4) throw SchemaError(where + ": expected 4 fields");
        RankedSecurity r;
        const double rank_value = csv::parse_number(f[0], where);
        if (!(rank_value >= 1.0) || rank_value != std::floor(rank_value)) {
            throw ValueError(where + ": rank must be a positive integer");
        }
        r.rank = static_cast<std::size_t>(rank_value);
        r.security_id = std::string(f[1]);
        r.key.score = csv::parse_number(f[2], where);
        r.key.premium_sign = (r.key.score > 0.0) - (r.key.score < 0.0);
        std::string_view trace = f[3];
        while (!trace.empty()) {
            const auto semi = trace.find(';');
            r.filter_trace.emplace_back(trace.substr(0, semi));
            if (semi == std::string_view::npos) break;
            trace.remove_prefix(semi + 1);
        }
        ranking.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (ranking[i].rank != i + 1) {
            throw OrderError(name + ": ranks must be contiguous from 1 in file order");
        }
    }
    return ranking;
}

}  // namespace bounce::screen
