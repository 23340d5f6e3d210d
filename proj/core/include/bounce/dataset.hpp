#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bounce/date.hpp"

namespace bounce {

/// One security-day record from a lending desk. Quantities are in shares,
/// loan balance in USD, rates as annual fractions.
struct LendingObservation {
    Date date;
    std::string security_id;
    double price = 0.0;
    double availability = 0.0;
    double short_interest = 0.0;
    double volume = 0.0;
    double loan_balance = 0.0;
    double loan_rate = 0.0;
    double alt_loan_rate = 0.0;

    friend bool operator==(const LendingObservation&, const LendingObservation&) = default;
};

/// Static attributes used by the screening filters.
struct SecurityProfile {
    std::string security_id;
    std::string market;
    double buy_rating = 3.0;  // 1 = strong sell .. 5 = strong buy
    double beta = 1.0;

    friend bool operator==(const SecurityProfile&, const SecurityProfile&) = default;
};

/// Date-ordered observations of one security.
struct SecuritySeries {
    std::string security_id;
    std::vector<LendingObservation> observations;

    bool empty() const { return observations.empty(); }
    std::size_t size() const { return observations.size(); }

    friend bool operator==(const SecuritySeries&, const SecuritySeries&) = default;
};

/// A full lending universe. Both vectors are sorted by security_id.
struct Dataset {
    std::vector<SecuritySeries> series;
    std::vector<SecurityProfile> profiles;

    std::size_t observation_count() const;
    const SecurityProfile* find_profile(const std::string& security_id) const;
    const SecuritySeries* find_series(const std::string& security_id) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Checks a single observation against the record invariants. Returns the
/// violation message, or nullopt when valid.
std::optional<std::string> check_observation(const LendingObservation& obs);

/// Throws on any invariant violation: series/profile ordering, per-series
/// date monotonicity, id consistency, observation values, and calendar gaps
/// (a series may not skip a date that appears in the union calendar between
/// its own first and last dates).
void validate(const Dataset& dataset);

/// Sorts series and profiles by security_id.
void canonicalize(Dataset& dataset);

}  // namespace bounce
