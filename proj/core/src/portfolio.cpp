#include "bounce/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"

namespace bounce::portfolio {

double PortfolioAllocation::total_weight() const {
    double s = 0.0;
    for (const auto& h : holdings) s += h.weight;
    return s;
}

double PortfolioAllocation::max_weight() const {
    double m = 0.0;
    for (const auto& h : holdings) m = std::max(m, h.weight);
    return m;
}

namespace {

void check_cap(std::size_t count, double cap) {
    if (!(cap > 0.0 && cap <= 1.0)) throw InfeasibleCap("cap must lie in (0, 1]");
    if (static_cast<double>(count) * cap < 1.0 - 1e-12) {
        throw InfeasibleCap(std::to_string(count) + " holdings with cap " + csv::format_number(cap) +
                            " cannot sum to 1");
    }
}

std::span<const screen::RankedSecurity> select_top(std::span<const screen::RankedSecurity> ranked,
                                                   std::size_t top) {
    if (top == 0) throw InfeasibleCap("portfolio needs at least one holding");
    if (ranked.empty()) throw EmptyAfterFilters("ranking is empty");
    return ranked.first(std::min(top, ranked.size()));
}

void check_scores(std::span<const screen::RankedSecurity> selected) {
    for (const auto& r : selected) {
        if (!(r.key.score > 0.0) || !std::isfinite(r.key.score)) {
            throw NonPositiveScore("score of '" + r.security_id + "' is " +
                                   csv::format_number(r.key.score) +
                                   "; selected scores must be finite and positive");
        }
    }
}

PortfolioAllocation assemble(std::span<const screen::RankedSecurity> selected,
                             std::span<const double> raw, double cap, Date as_of) {
    const auto weights = cap_and_redistribute(raw, cap);
    PortfolioAllocation alloc;
    alloc.as_of = as_of;
    alloc.cap = cap;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        alloc.holdings.push_back({selected[i].security_id, weights[i], selected[i].key.score});
    }
    return alloc;
}

}  // namespace

std::vector<double> cap_and_redistribute(std::span<const double> raw, double cap) {
    check_cap(raw.size(), cap);
    const std::size_t n = raw.size();
    for (double r : raw) {
        if (!(r > 0.0) || !std::isfinite(r)) throw NonPositiveScore("raw weights must be positive");
    }
    std::vector<double> w(n);
    std::vector<bool> capped(n, false);
    for (std::size_t pass = 0; pass <= n; ++pass) {
        double free_raw = 0.0;
        std::size_t n_capped = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (capped[i]) ++n_capped;
            else free_raw += raw[i];
        }
        const double free_mass = 1.0 - static_cast<double>(n_capped) * cap;
        bool violated = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (capped[i]) {
                w[i] = cap;
                continue;
            }
            if (n_capped == 0) w[i] = raw[i];  // raw is already normalized
            else w[i] = free_mass > 0.0 && free_raw > 0.0 ? raw[i] * free_mass / free_raw : 0.0;
            if (w[i] > cap) violated = true;
        }
        if (!violated) return w;
        for (std::size_t i = 0; i < n; ++i) {
            if (!capped[i] && w[i] > cap) capped[i] = true;
        }
    }
    return w;
}

PortfolioAllocation construct(std::span<const screen::RankedSecurity> ranked, std::size_t top,
                              double cap, Date as_of) {
    const auto selected = select_top(ranked, top);
    check_cap(selected.size(), cap);
    check_scores(selected);
    const double total = std::accumulate(selected.begin(), selected.end(), 0.0,
                                         [](double acc, const auto& r) { return acc + r.key.score; });
    std::vector<double> raw;
    raw.reserve(selected.size());
    for (const auto& r : selected) raw.push_back(r.key.score / total);
    return assemble(selected, raw, cap, as_of);
}

RebalanceResult rebalance(const PortfolioAllocation& current,
                          std::span<const screen::RankedSecurity> new_ranking, double threshold,
                          Date as_of) {
    if (!(threshold >= 0.0)) throw ConfigError("rebalance threshold must be non-negative");
    const std::size_t m = current.size();
    const auto top = new_ranking.first(std::min(m, new_ranking.size()));

    bool same_members = top.size() == m;
    double max_change = 0.0;
    for (const auto& h : current.holdings) {
        auto it = std::find_if(top.begin(), top.end(),
                               [&](const auto& r) { return r.security_id == h.security_id; });
        if (it == top.end()) {
            same_members = false;
            break;
        }
        const double denom = std::fabs(h.score);
        const double change = denom > 0.0 ? std::fabs(it->key.score - h.score) / denom
                                           : (it->key.score == h.score ? 0.0 : HUGE_VAL);
        max_change = std::max(max_change, change);
    }
    // A zero threshold rebuilds on any perturbation; identical scores never do.
    if (same_members && (max_change < threshold || max_change == 0.0)) {
        return {current, false};
    }
    return {construct(new_ranking, m, current.cap, as_of), true};
}

PortfolioAllocation variance_penalized_weights(
    std::span<const screen::RankedSecurity> ranked,
    const std::map<std::string, std::vector<double>>& score_history, std::size_t top, double cap,
    Date as_of) {
    const auto selected = select_top(ranked, top);
    check_cap(selected.size(), cap);
    check_scores(selected);

    std::vector<double> raw(selected.size());
    std::vector<bool> zero_var(selected.size(), false);
    double max_finite = 0.0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        auto it = score_history.find(selected[i].security_id);
        if (it == score_history.end() || it->second.size() < 2) {
            throw InsufficientHistory("need two historical scores for '" +
                                      selected[i].security_id + "'");
        }
        const auto& h = it->second;
        const double m = std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(h.size());
        double ss = 0.0;
        for (double x : h) ss += (x - m) * (x - m);
        const double var = ss / static_cast<double>(h.size() - 1);
        if (var == 0.0) {
            zero_var[i] = true;
        } else {
            raw[i] = selected[i].key.score / var;
            max_finite = std::max(max_finite, raw[i]);
        }
    }
    const bool all_zero = std::all_of(zero_var.begin(), zero_var.end(), [](bool z) { return z; });
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (all_zero) raw[i] = selected[i].key.score;
        else if (zero_var[i]) raw[i] = max_finite;
    }
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    for (double& r : raw) r /= total;
    return assemble(selected, raw, cap, as_of);
}

std::string allocation_to_csv(const PortfolioAllocation& allocation) {
    std::string out(kAllocationHeader);
    out += '\n';
    for (const auto& h : allocation.holdings) {
        out += h.security_id + ',' + csv::format_number(h.weight) + '\n';
    }
    return out;
}

}  // namespace bounce::portfolio
