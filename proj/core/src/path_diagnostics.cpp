#include "bounce/path_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"
#include "bounce/noise_stream.hpp"

namespace bounce::diag {

namespace {

constexpr double kStart = 100.0;
constexpr double kReturnTolerance = 1e-9;

// Builds a path from log increments that sum to log(1 + target_return) and
// pins the final point to start * (1 + target_return) exactly.
std::vector<double> path_from_increments(std::span<const double> increments, double target_return) {
    std::vector<double> path;
    path.reserve(increments.size() + 1);
    path.push_back(kStart);
    double level = 0.0;
    for (double inc : increments) {
        level += inc;
        path.push_back(kStart * std::exp(level));
    }
    path.back() = kStart * (1.0 + target_return);
    return path;
}

// Shifts increments so they sum to `total` exactly in exact arithmetic.
void recenter(std::vector<double>& inc, double total) {
    const double shift = (total - std::accumulate(inc.begin(), inc.end(), 0.0)) /
                         static_cast<double>(inc.size());
    for (double& x : inc) x += shift;
}

// Positive weights rescaled to sum to `total`; dispersion grows with `spread`.
std::vector<double> proportional_increments(NoiseStream& rng, std::size_t n, double total,
                                            double spread) {
    std::vector<double> w(n);
    for (double& x : w) x = std::exp(spread * rng.normal());
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x = total * x / sum;
    return w;
}

bool strictly_increasing(std::span<const double> p) {
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (!(p[i] > p[i - 1])) return false;
    }
    return true;
}

bool has_down_move(std::span<const double> p) {
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] < p[i - 1]) return true;
    }
    return false;
}

}  // namespace

std::vector<double> simple_returns(std::span<const double> path) {
    std::vector<double> r;
    if (path.size() < 2) return r;
    r.reserve(path.size() - 1);
    for (std::size_t i = 1; i < path.size(); ++i) r.push_back(path[i] / path[i - 1] - 1.0);
    return r;
}

std::size_t count_direction_changes(std::span<const double> returns) {
    std::size_t changes = 0;
    int prev = 0;
    for (double r : returns) {
        const int sign = (r > 0.0) - (r < 0.0);
        if (sign == 0) continue;
        if (prev != 0 && sign != prev) ++changes;
        prev = sign;
    }
    return changes;
}

PathStats path_stats(std::span<const double> path, double periods_per_year) {
    if (path.size() < 2) throw PathTooShort("path statistics need at least two points");
    if (!(periods_per_year > 0.0)) throw ValueError("periods_per_year must be positive");
    for (double p : path) {
        if (!(p > 0.0) || !std::isfinite(p)) throw ValueError("path values must be positive");
    }
    PathStats s;
    s.total_return = path.back() / path.front() - 1.0;
    const auto r = simple_returns(path);
    if (r.size() >= 2) {
        const double m = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
        double ss = 0.0;
        for (double x : r) ss += (x - m) * (x - m);
        s.volatility = std::sqrt(ss / static_cast<double>(r.size() - 1)) * std::sqrt(periods_per_year);
    }
    s.direction_changes = count_direction_changes(r);
    if (s.volatility > 0.0) {
        s.return_to_vol = s.total_return / s.volatility;
    } else if (s.total_return != 0.0) {
        s.return_to_vol = std::copysign(std::numeric_limits<double>::infinity(), s.total_return);
    }
    return s;
}

std::vector<Clause> check_clauses(ScenarioKind kind, double target_return,
                                  std::span<const double> a, std::span<const double> b,
                                  double periods_per_year) {
    const PathStats sa = path_stats(a, periods_per_year);
    const PathStats sb = path_stats(b, periods_per_year);
    std::vector<Clause> c;
    const bool equal_return = std::fabs(sa.total_return - target_return) <= kReturnTolerance &&
                              std::fabs(sb.total_return - target_return) <= kReturnTolerance;
    c.push_back({"both paths return the target " + csv::format_number(target_return) +
                     " within 1e-9",
                 equal_return});
    switch (kind) {
        case ScenarioKind::upward_penalized:
            c.push_back({"path_a is strictly increasing", strictly_increasing(a)});
            c.push_back({"path_b is strictly increasing", strictly_increasing(b)});
            c.push_back({"neither path changes direction",
                         sa.direction_changes == 0 && sb.direction_changes == 0});
            c.push_back({"vol(b) > vol(a)", sb.volatility > sa.volatility});
            c.push_back({"return_to_vol(a) > return_to_vol(b)", sa.return_to_vol > sb.return_to_vol});
            break;
        case ScenarioKind::downward_not_penalized:
            c.push_back({"path_a is strictly increasing", strictly_increasing(a)});
            c.push_back({"path_b has at least one falling step", has_down_move(b)});
            c.push_back({"vol(b) < vol(a)", sb.volatility < sa.volatility});
            break;
        case ScenarioKind::downward_movement:
            c.push_back({"both paths end below their start",
                         sa.total_return < 0.0 && sb.total_return < 0.0});
            c.push_back({"path_a changes direction less often than path_b",
                         sa.direction_changes < sb.direction_changes});
            c.push_back({"vol(a) > vol(b)", sa.volatility > sb.volatility});
            c.push_back({"return_to_vol(a) > return_to_vol(b)", sa.return_to_vol > sb.return_to_vol});
            break;
    }
    return c;
}

bool Scenario::all_hold() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.holds; });
}

std::string Scenario::report() const {
    std::string out = "scenario " + std::to_string(static_cast<int>(kind)) + " target_return " +
                      csv::format_number(target_return) + " seed " + std::to_string(seed) +
                      " attempts " + std::to_string(attempts) + "\n";
    auto stats_line = [](const char* name, const PathStats& s) {
        return std::string(name) + " total_return " + csv::format_number(s.total_return) +
               " volatility " + csv::format_number(s.volatility) + " direction_changes " +
               std::to_string(s.direction_changes) + " return_to_vol " +
               csv::format_number(s.return_to_vol) + "\n";
    };
    out += stats_line("path_a", stats_a);
    out += stats_line("path_b", stats_b);
    for (const auto& c : clauses) out += std::string(c.holds ? "PASS " : "FAIL ") + c.description + "\n";
    return out;
}

std::string Scenario::paths_csv() const {
    std::string out = "step,path_a,path_b\n";
    for (std::size_t i = 0; i < path_a.size(); ++i) {
        out += std::to_string(i) + ',' + csv::format_number(path_a[i]) + ',' +
               csv::format_number(path_b[i]) + '\n';
    }
    return out;
}

Scenario make_scenario(ScenarioKind kind, double target_return, std::size_t length,
                       std::uint64_t seed, double periods_per_year, std::size_t max_attempts) {
    if (length < 4) throw ValueError("scenario paths need at least 4 points");
    if (!std::isfinite(target_return) || target_return <= -1.0) {
        throw ValueError("target_return must be finite and above -100%");
    }
    if (kind == ScenarioKind::downward_movement ? !(target_return < 0.0) : !(target_return > 0.0)) {
        throw ValueError(kind == ScenarioKind::downward_movement
                             ? "scenario 3 needs a negative target_return"
                             : "scenarios 1 and 2 need a positive target_return");
    }

    const std::size_t steps = length - 1;
    const double total = std::log1p(target_return);
    const double ramp = total / static_cast<double>(steps);
    NoiseStream rng(seed, SubstreamId{0, static_cast<std::uint16_t>(kind), 0});

    Scenario sc;
    sc.kind = kind;
    sc.target_return = target_return;
    sc.seed = seed;
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        std::vector<double> inc_a, inc_b;
        switch (kind) {
            case ScenarioKind::upward_penalized:
                inc_a = proportional_increments(rng, steps, total, 0.15);
                inc_b = proportional_increments(rng, steps, total, 1.0);
                break;
            case ScenarioKind::downward_not_penalized:
                inc_a = proportional_increments(rng, steps, total, 1.5);
                inc_b.resize(steps);
                for (double& x : inc_b) x = ramp + 1.5 * std::fabs(ramp) * rng.normal();
                recenter(inc_b, total);
                break;
            case ScenarioKind::downward_movement:
                inc_a = proportional_increments(rng, steps, total, 1.2);
                inc_b.resize(steps);
                for (std::size_t t = 0; t < steps; ++t) {
                    const double swing = std::fabs(ramp) * (1.2 + 0.3 * rng.uniform());
                    inc_b[t] = ramp + (t % 2 == 0 ? -swing : swing);
                }
                recenter(inc_b, total);
                break;
        }
        auto a = path_from_increments(inc_a, target_return);
        auto b = path_from_increments(inc_b, target_return);
        auto clauses = check_clauses(kind, target_return, a, b, periods_per_year);
        const bool ok =
            std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.holds; });
        if (ok) {
            sc.attempts = attempt;
            sc.stats_a = path_stats(a, periods_per_year);
            sc.stats_b = path_stats(b, periods_per_year);
            sc.path_a = std::move(a);
            sc.path_b = std::move(b);
            sc.clauses = std::move(clauses);
            return sc;
        }
    }
    throw GenerationFailure("no path pair satisfied scenario " +
                            std::to_string(static_cast<int>(kind)) + " in " +
                            std::to_string(max_attempts) + " attempts");
}

}  // namespace bounce::diag
