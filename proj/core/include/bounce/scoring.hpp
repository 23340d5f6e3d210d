#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bounce/dataset.hpp"

namespace bounce::scoring {

enum class Flavor { ma, first_day, last_day };
enum class RateSource { loan_rate, alt_loan_rate };

std::string_view to_string(Flavor f);
/// Accepts "ma", "first-day"/"first_day", "last-day"/"last_day".
std::optional<Flavor> parse_flavor(std::string_view text);
std::string_view to_string(RateSource r);
std::optional<RateSource> parse_rate_source(std::string_view text);

struct ScoreConfig {
    double rf = 0.01;             // rate threshold, annual fraction
    std::size_t ma_window = 60;   // days for the moving average
    std::size_t vol_window = 60;  // days for the rate standard deviation
    std::size_t lbg_lag = 60;     // N in LB_t / LB_{t-N}
    std::size_t adv_window = 20;  // liquidity filter window
    RateSource rate_source = RateSource::loan_rate;

    /// Throws ConfigError unless every window is >= 2 and rf is finite.
    void validate() const;
};

/// Factors feeding the four short scores for one security on one date.
struct DerivedFactors {
    double e_lr = 0.0;      // expected loan rate
    double sigma_lr = 0.0;  // loan-rate standard deviation
    double dtc = 0.0;       // days to cover, SI / ADV in shares
    double lbg = 0.0;       // loan balance growth ratio
    double ma_si = 0.0;     // short interest view (shares)
    double ma_la = 0.0;     // availability view (shares)
    double si_usd = 0.0;
    double la_usd = 0.0;
    double adv = 0.0;       // volume view (shares/day) used for DTC
    double adv20 = 0.0;     // trailing liquidity-window average volume (shares/day)
    double lb_start = 0.0;  // LB_{t-N}
    double lb_end = 0.0;    // LB_t

    friend bool operator==(const DerivedFactors&, const DerivedFactors&) = default;
};

enum class ExclusionReason {
    none,
    insufficient_history,
    zero_availability,
    zero_volume,
    zero_loan_balance,
};

std::string_view to_string(ExclusionReason r);
std::optional<ExclusionReason> parse_exclusion_reason(std::string_view text);

/// One row of a score table.
struct ShortScoreRow {
    Date date;
    std::string security_id;
    Flavor flavor = Flavor::ma;
    double price = 0.0;
    double loan_rate = 0.0;      // flavor view of the sourcing rate
    double alt_loan_rate = 0.0;  // flavor view of the alternate rate
    DerivedFactors factors;
    double score_one = 0.0;
    double score_two = 0.0;
    double score_three = 0.0;
    double score_four = 0.0;
    bool excluded = false;
    ExclusionReason reason = ExclusionReason::none;

    /// Sign of E(LR) - r_f, recovered from score_one.
    int premium_sign() const;

    double score(int which) const;
};

// --- primitive formulas -------------------------------------------------------

/// Mean of the last min(window, size) values. Throws EmptySeries.
double moving_average(std::span<const double> series, std::size_t window);

/// Unbiased (n - 1) sample standard deviation. Requires >= 2 values.
double sample_stddev(std::span<const double> values);

/// (e_x - threshold) / sigma_x. With sigma_x == 0 the result is +inf, -inf
/// or 0 according to the sign of the numerator.
double sharpe_like(double e_x, double threshold, double sigma_x);

/// multiplier * score, with a zero multiplier giving 0 even when the score
/// is an infinite sentinel.
double scale_score(double multiplier, double score);

double score_one(const DerivedFactors& f, const ScoreConfig& cfg);

/// Each multiplier-bearing score returns nullopt when its denominator is
/// zero; the row is then excluded rather than carrying an infinity.
std::optional<double> score_two(const DerivedFactors& f, const ScoreConfig& cfg);
std::optional<double> score_three(const DerivedFactors& f, const ScoreConfig& cfg);
std::optional<double> score_four(const DerivedFactors& f, const ScoreConfig& cfg);

/// Days to cover in days; nullopt when adv is zero.
std::optional<double> days_to_cover(double short_interest_shares, double adv_shares);

// --- series evaluation ---------------------------------------------------------

struct RateStats {
    double e_lr = 0.0;
    double sigma_lr = 0.0;
};

/// E(LR) and sigma_LR at observation index `as_of`.
///
/// sigma_LR uses up to vol_window rate levels ending at as_of for the ma and
/// last_day flavors; first_day has no trailing history, so its window starts
/// at as_of and runs forward. E(LR) is the moving average over ma_window for
/// ma, the as_of value otherwise. Throws InsufficientHistory when fewer than
/// two rates fall in the window.
RateStats rate_stats(const SecuritySeries& series, const ScoreConfig& cfg, Flavor flavor,
                     std::size_t as_of);

/// All factors for a series at the flavor's evaluation date. Throws
/// InsufficientHistory, EmptySeries.
DerivedFactors derive_factors(const SecuritySeries& series, const ScoreConfig& cfg, Flavor flavor);

/// Scores one security. Never throws for data-driven conditions; they
/// become exclusion reasons.
ShortScoreRow score_series(const SecuritySeries& series, const ScoreConfig& cfg, Flavor flavor);

/// One row per security, ordered by security_id.
std::vector<ShortScoreRow> score_table(const Dataset& dataset, const ScoreConfig& cfg,
                                       Flavor flavor, unsigned threads = 1);

// --- weighted factor score ------------------------------------------------------

struct FactorWeights {
    double w_si = 0.2;
    double w_lr = 0.2;
    double w_dtc = 0.2;
    double w_lbg = 0.2;
    double w_ila = 0.2;
    double w_rate_vol = 0.0;  // applied to -sigma_LR

    double sum() const { return w_si + w_lr + w_dtc + w_lbg + w_ila + w_rate_vol; }
    /// Throws InvalidWeights unless the weights sum to 1 within 1e-9.
    void validate() const;
};

/// Cross-sectional weighted score: each factor (SI_usd, E(LR), DTC, LBG,
/// 1/LA_usd, -sigma_LR) is z-scored across `factors` with the sample
/// standard deviation, then combined with `weights`. A factor with zero
/// dispersion and a non-zero weight throws DegenerateCrossSection;
/// zero-weight factors are skipped.
std::vector<double> weighted_score(std::span<const DerivedFactors> factors,
                                   const FactorWeights& weights);

// --- score-table CSV ------------------------------------------------------------

inline constexpr std::string_view kScoreTableHeader =
    "date,security_id,price,availability,short_interest,volume,loan_rate,alt_loan_rate,"
    "rate_volatility,loan_balance_start,loan_balance_end,score_one,score_two,score_three,"
    "score_four,excluded,reason";

std::string score_table_to_csv(std::span<const ShortScoreRow> rows);

/// Reads a score table back. Columns absent from the file (E(LR), the
/// liquidity average) are reconstructed where possible: e_lr is left NaN and
/// adv20 is NaN until attach_liquidity fills it.
std::vector<ShortScoreRow> read_score_table(const std::filesystem::path& path, Flavor flavor);

/// Fills factors.adv20 for each row from the dataset, using the row date as
/// the evaluation date.
void attach_liquidity(std::vector<ShortScoreRow>& rows, const Dataset& dataset,
                      const ScoreConfig& cfg);

}  // namespace bounce::scoring
