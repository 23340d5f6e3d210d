#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bounce/dataset.hpp"
#include "bounce/date.hpp"
#include "bounce/noise_stream.hpp"

namespace bounce::sim {

enum class Variable : std::uint16_t {
    price = 0,
    availability,
    short_interest,
    volume,
    loan_balance,
    loan_rate,
    alt_loan_rate,
};

inline constexpr std::size_t kVariableCount = 7;
inline constexpr std::array<Variable, kVariableCount> kAllVariables{
    Variable::price,        Variable::availability, Variable::short_interest,
    Variable::volume,       Variable::loan_balance, Variable::loan_rate,
    Variable::alt_loan_rate};

std::string_view to_string(Variable v);
std::optional<Variable> parse_variable(std::string_view name);

/// Trading-day time step in years.
inline constexpr double kTradingDaysPerYear = 252.0;
inline constexpr double kDefaultDt = 1.0 / kTradingDaysPerYear;

struct Interval {
    double min = 0.0;
    double max = 0.0;

    double midpoint() const { return 0.5 * (min + max); }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Uniform-draw bounds for one simulated variable.
///
/// For GBM-driven variables `start` is the initial level, `drift` the
/// annual drift and `vol` the annual volatility. For the loan balance the
/// draws from `drift` and `vol` are the mean and standard deviation (USD)
/// of the underlying normal and `start` is not consumed.
struct SimulationSeedRange {
    Variable variable = Variable::price;
    Interval start;
    Interval drift;
    Interval vol;

    /// Throws InvalidSeedRange.
    void validate() const;

    friend bool operator==(const SimulationSeedRange&, const SimulationSeedRange&) = default;
};

struct GbmParams {
    double s0 = 1.0;
    double mu = 0.0;
    double sigma = 0.0;
};

struct FoldedNormalParams {
    double mu = 0.0;
    double sigma = 0.0;
};

using VariableParams = std::variant<GbmParams, FoldedNormalParams>;

/// Independent uniform draws of each parameter from its interval. The loan
/// balance yields FoldedNormalParams, every other variable GbmParams.
VariableParams draw_params(const SimulationSeedRange& range, NoiseStream& stream);

/// Exact log-normal discretisation of dS/S = mu dt + sigma dW.
/// Returns n_days values starting at s0.
std::vector<double> simulate_gbm(const GbmParams& params, std::size_t n_days, double dt,
                                 NoiseStream& stream);

/// n_days independent draws of |N(mu, sigma^2)|.
std::vector<double> simulate_abs_normal(const FoldedNormalParams& params, std::size_t n_days,
                                        NoiseStream& stream);

/// Everything needed to generate a universe; a run is a pure function of it.
struct SeedConfig {
    std::vector<SimulationSeedRange> ranges;
    std::size_t n_securities = 100;
    std::size_t n_days = 253;
    std::uint64_t master_seed = 42;
    Date start_date{2020, 1, 2};
    Interval buy_rating{1.0, 5.0};
    Interval beta{0.8, 2.5};
    std::vector<std::string> markets{"JP", "HK", "TW", "KR", "SG", "TH", "ID", "MY"};
    double dt = kDefaultDt;

    /// Artifact defaults. Price and rate volatilities sit below the
    /// quantity volatilities, and quantity drifts span a wider range.
    static SeedConfig defaults();

    /// Throws MissingVariableRange when any of the seven variables has no
    /// range, InvalidSeedRange for malformed bounds.
    void validate() const;

    const SimulationSeedRange& range_for(Variable v) const;
};

/// Parameters drawn for one security, kept for audit output.
struct SecurityDraw {
    std::array<VariableParams, kVariableCount> params;
};

/// Substream channel for a (security, variable) pair.
enum class Channel : std::uint16_t { params = 0, path = 1, profile = 2 };

std::string security_id_for(std::size_t index, std::size_t n_securities);

/// Trading calendar of `n_days` weekdays starting at the first weekday on or
/// after `start`.
std::vector<Date> trading_calendar(Date start, std::size_t n_days);

/// Simulates one security. Pure given (config, index).
SecuritySeries simulate_security(const SeedConfig& config, std::size_t index,
                                 const std::vector<Date>& calendar,
                                 SecurityDraw* draw_out = nullptr);

SecurityProfile simulate_profile(const SeedConfig& config, std::size_t index);

/// Full universe. `threads` only affects wall time; the result is identical
/// for every thread count.
Dataset simulate_universe(const SeedConfig& config, unsigned threads = 1);

}  // namespace bounce::sim
