#include "bounce/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bounce/errors.hpp"

namespace bounce {

std::size_t Dataset::observation_count() const {
    std::size_t n = 0;
    for (const auto& s : series) n += s.size();
    return n;
}

const SecurityProfile* Dataset::find_profile(const std::string& security_id) const {
    auto it = std::lower_bound(profiles.begin(), profiles.end(), security_id,
                               [](const SecurityProfile& p, const std::string& id) {
                                   return p.security_id < id;
                               });
    return it != profiles.end() && it->security_id == security_id ? &*it : nullptr;
}

const SecuritySeries* Dataset::find_series(const std::string& security_id) const {
    auto it = std::lower_bound(series.begin(), series.end(), security_id,
                               [](const SecuritySeries& s, const std::string& id) {
                                   return s.security_id < id;
                               });
    return it != series.end() && it->security_id == security_id ? &*it : nullptr;
}

std::optional<std::string> check_observation(const LendingObservation& obs) {
    auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
    if (!std::isfinite(obs.price) || obs.price <= 0.0) return "price must be positive";
    if (bad(obs.availability)) return "availability must be non-negative";
    if (bad(obs.short_interest)) return "short_interest must be non-negative";
    if (bad(obs.volume)) return "volume must be non-negative";
    if (bad(obs.loan_balance)) return "loan_balance must be non-negative";
    if (bad(obs.loan_rate)) return "loan_rate must be non-negative";
    if (bad(obs.alt_loan_rate)) return "alt_loan_rate must be non-negative";
    if (obs.alt_loan_rate < obs.loan_rate) return "alt_loan_rate below loan_rate";
    return std::nullopt;
}

void validate(const Dataset& dataset) {
    std::set<Date> calendar;
    for (std::size_t i = 0; i < dataset.series.size(); ++i) {
        const auto& s = dataset.series[i];
        if (i > 0 && !(dataset.series[i - 1].security_id < s.security_id)) {
            throw OrderError("series not strictly sorted by security_id at '" + s.security_id + "'");
        }
        for (std::size_t t = 0; t < s.size(); ++t) {
            const auto& obs = s.observations[t];
            if (obs.security_id != s.security_id) {
                throw ValueError("observation for '" + obs.security_id + "' inside series '" +
                                 s.security_id + "'");
            }
            if (t > 0 && !(s.observations[t - 1].date < obs.date)) {
                throw OrderError("dates not strictly increasing for '" + s.security_id + "' at " +
                                 obs.date.to_string());
            }
            if (auto msg = check_observation(obs)) {
                throw ValueError(s.security_id + " " + obs.date.to_string() + ": " + *msg);
            }
            calendar.insert(obs.date);
        }
    }
    for (const auto& s : dataset.series) {
        if (s.empty()) continue;
        auto it = calendar.find(s.observations.front().date);
        for (const auto& obs : s.observations) {
            if (*it != obs.date) {
                throw GapError("series '" + s.security_id + "' is missing trading day " +
                               it->to_string());
            }
            ++it;
        }
    }
    for (std::size_t i = 1; i < dataset.profiles.size(); ++i) {
        if (!(dataset.profiles[i - 1].security_id < dataset.profiles[i].security_id)) {
            throw OrderError("profiles not strictly sorted by security_id at '" +
                             dataset.profiles[i].security_id + "'");
        }
    }
    for (const auto& p : dataset.profiles) {
        if (!(p.buy_rating >= 1.0 && p.buy_rating <= 5.0)) {
            throw ValueError("buy_rating outside [1, 5] for '" + p.security_id + "'");
        }
        if (!std::isfinite(p.beta)) throw ValueError("beta not finite for '" + p.security_id + "'");
    }
}

void canonicalize(Dataset& dataset) {
    std::sort(dataset.series.begin(), dataset.series.end(),
              [](const auto& a, const auto& b) { return a.security_id < b.security_id; });
    std::sort(dataset.profiles.begin(), dataset.profiles.end(),
              [](const auto& a, const auto& b) { return a.security_id < b.security_id; });
}

}  // namespace bounce
