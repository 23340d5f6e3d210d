#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bounce/dataset.hpp"
#include "bounce/scoring.hpp"

namespace bounce::screen {

/// Filter names in evaluation order. A row is excluded by the first filter
/// it fails.
inline constexpr std::string_view kMinSiUsd = "min_si_usd";
inline constexpr std::string_view kMinLoanRate = "min_loan_rate";
inline constexpr std::string_view kMinDtc = "min_dtc";
inline constexpr std::string_view kMinLbg = "min_lbg";
inline constexpr std::string_view kMaxLaUsd = "max_la_usd";
inline constexpr std::string_view kMinAdvUsd = "min_adv_usd";
inline constexpr std::string_view kMinBuyRating = "min_buy_rating";
inline constexpr std::string_view kMinBeta = "min_beta";
inline constexpr std::string_view kMissingProfile = "missing_profile";
inline constexpr std::string_view kExclusionList = "exclusion_list";

inline constexpr std::string_view kThresholdFilters[] = {
    kMinSiUsd, kMinLoanRate, kMinDtc, kMinLbg, kMaxLaUsd, kMinAdvUsd, kMinBuyRating, kMinBeta};

/// Converts a growth percentage (25 means +25%) into the ratio form used by
/// min_lbg (1.25).
constexpr double lbg_ratio_from_percent(double percent) { return 1.0 + percent / 100.0; }

struct FilterConfig {
    double min_si_usd = 10'000'000.0;
    double min_loan_rate = 0.015;
    double min_dtc = 4.0;
    double min_lbg = 1.25;
    double max_la_usd = 10'000'000.0;
    double min_adv_usd = 25'000'000.0;  // trailing average volume x price
    double min_buy_rating = 2.5;
    double min_beta = 1.2;
    double drop_bottom_pct = 20.0;
    /// Per-market multiplier applied to the USD thresholds (min_si_usd,
    /// max_la_usd, min_adv_usd). Markets not listed use 1.
    std::map<std::string, double> market_scale;
    /// Manually maintained ids removed before any threshold filter
    /// (downgrades, litigation and similar events).
    std::set<std::string> exclusion_list;

    /// Every threshold set so that nothing fails, and no bottom drop.
    static FilterConfig permissive();

    /// Throws ConfigError on NaN thresholds, a non-positive market scale or
    /// drop_bottom_pct outside [0, 100).
    void validate() const;

    double usd_scale(const std::string& market) const;
};

struct ScreenedRow {
    scoring::ShortScoreRow row;
    std::vector<std::string> passed;  // filters passed, in evaluation order
};

struct ExcludedRow {
    scoring::ShortScoreRow row;
    std::string reason;  // first failed filter or score exclusion reason
};

struct FilterResult {
    std::vector<ScreenedRow> kept;      // ordered by security_id
    std::vector<ExcludedRow> excluded;  // ordered by security_id
};

/// Applies the exclusion filters to rows from one evaluation date and
/// flavor. Rows already excluded by scoring keep their scoring reason. USD
/// views are shares x price; liquidity uses factors.adv20.
FilterResult apply_filters(std::span<const scoring::ShortScoreRow> rows, const Dataset& profiles,
                           const FilterConfig& cfg);

struct RankKey {
    int premium_sign = 0;
    double score = 0.0;
};

struct RankedSecurity {
    std::string security_id;
    std::size_t rank = 0;
    RankKey key;
    scoring::Flavor flavor = scoring::Flavor::ma;
    int score_selector = 1;
    std::vector<std::string> filter_trace;
};

/// Orders by (premium sign, selected score) descending with security_id as
/// the tie-break, then removes the bottom ceil(K * pct / 100). Excluded rows
/// are skipped. Throws EmptyAfterFilters when nothing remains.
std::vector<RankedSecurity> rank(std::span<const ScreenedRow> kept, int score_selector,
                                 double drop_bottom_pct);

std::vector<RankedSecurity> rank(std::span<const scoring::ShortScoreRow> rows, int score_selector,
                                 double drop_bottom_pct);

/// Mean absolute rank change per transition for every security seen in any
/// snapshot. A transition where the security is missing from either side
/// costs `universe_size` (0 means: number of distinct securities).
/// Throws InsufficientSnapshots with fewer than two snapshots.
std::map<std::string, double> rank_stability(std::span<const std::vector<RankedSecurity>> snapshots,
                                             std::size_t universe_size = 0);

inline constexpr std::string_view kRankingHeader = "rank,security_id,score,filter_trace";
inline constexpr std::string_view kExcludedHeader = "security_id,reason";

std::string ranking_to_csv(std::span<const RankedSecurity> ranking);
std::string excluded_to_csv(std::span<const ExcludedRow> excluded);

/// Reads rank, security_id, score and filter_trace back.
std::vector<RankedSecurity> read_ranking(const std::filesystem::path& path);

}  // namespace bounce::screen
