#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bounce/csv_io.hpp"
#include "bounce/errors.hpp"
#include "json.hpp"

namespace bounce::app {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

// Thresholds accept null as "disabled", mapped to the permissive infinity.
void read_threshold(const json& obj, const char* key, double& out, double disabled) {
    if (!obj.contains(key)) return;
    if (obj.at(key).is_null()) {
        out = disabled;
        return;
    }
    read(obj, key, out);
}

json threshold(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

sim::Interval read_interval(const json& obj, const char* key, sim::Interval fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& iv = obj.at(key);
    read(iv, "min", fallback.min);
    read(iv, "max", fallback.max);
    return fallback;
}

json interval(const sim::Interval& iv) { return {{"min", iv.min}, {"max", iv.max}}; }

void require_object(const json& j, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

}  // namespace

int parse_score_selector(std::string_view name) {
    if (name == "one" || name == "1") return 1;
    if (name == "two" || name == "2") return 2;
    if (name == "three" || name == "3") return 3;
    if (name == "four" || name == "4") return 4;
    throw ConfigError("score selector must be one, two, three or four");
}

std::string_view score_selector_name(int selector) {
    switch (selector) {
        case 1: return "one";
        case 2: return "two";
        case 3: return "three";
        case 4: return "four";
        default: return "?";
    }
}

void RunConfig::validate() const {
    simulation.validate();
    scoring.validate();
    filters.validate();
    if (score_selector < 1 || score_selector > 4) throw ConfigError("score selector must be 1..4");
    if (portfolio.top == 0) throw ConfigError("portfolio.top must be positive");
    if (!(portfolio.cap > 0.0 && portfolio.cap <= 1.0)) throw ConfigError("portfolio.cap must lie in (0, 1]");
    if (!(portfolio.rebalance_threshold >= 0.0)) {
        throw ConfigError("portfolio.rebalance_threshold must be non-negative");
    }
}

RunConfig parse_run_config(const std::string& json_text, const RunConfig& base) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_object(doc, "config");
    RunConfig cfg = base;

    if (doc.contains("simulation")) {
        const auto& s = doc.at("simulation");
        require_object(s, "simulation");
        auto& sc = cfg.simulation;
        read(s, "n_securities", sc.n_securities);
        read(s, "n_days", sc.n_days);
        read(s, "master_seed", sc.master_seed);
        read(s, "dt", sc.dt);
        read(s, "markets", sc.markets);
        if (s.contains("start_date")) {
            try {
                sc.start_date = Date::parse(s.at("start_date").get<std::string>());
            } catch (const std::exception& e) {
                throw ConfigError(std::string("simulation.start_date: ") + e.what());
            }
        }
        sc.buy_rating = read_interval(s, "buy_rating", sc.buy_rating);
        sc.beta = read_interval(s, "beta", sc.beta);
        if (s.contains("variables")) {
            const auto& vars = s.at("variables");
            require_object(vars, "simulation.variables");
            sc.ranges.clear();
            for (const auto& [name, block] : vars.items()) {
                const auto v = sim::parse_variable(name);
                if (!v) throw ConfigError("unknown simulation variable '" + name + "'");
                sim::SimulationSeedRange r;
                r.variable = *v;
                read(block, "start_min", r.start.min);
                read(block, "start_max", r.start.max);
                read(block, "drift_min", r.drift.min);
                read(block, "drift_max", r.drift.max);
                read(block, "vol_min", r.vol.min);
                read(block, "vol_max", r.vol.max);
                sc.ranges.push_back(r);
            }
            std::sort(sc.ranges.begin(), sc.ranges.end(),
                      [](const auto& a, const auto& b) { return a.variable < b.variable; });
        }
    }

    if (doc.contains("scoring")) {
        const auto& s = doc.at("scoring");
        require_object(s, "scoring");
        read(s, "rf", cfg.scoring.rf);
        read(s, "ma_window", cfg.scoring.ma_window);
        read(s, "vol_window", cfg.scoring.vol_window);
        read(s, "lbg_lag", cfg.scoring.lbg_lag);
        read(s, "adv_window", cfg.scoring.adv_window);
        if (s.contains("rate_source")) {
            const auto src = scoring::parse_rate_source(s.at("rate_source").get<std::string>());
            if (!src) throw ConfigError("scoring.rate_source must be loan_rate or alt_loan_rate");
            cfg.scoring.rate_source = *src;
        }
    }

    if (doc.contains("filters")) {
        const auto& f = doc.at("filters");
        require_object(f, "filters");
        auto& fc = cfg.filters;
        read_threshold(f, "min_si_usd", fc.min_si_usd, -kInf);
        read_threshold(f, "min_loan_rate", fc.min_loan_rate, -kInf);
        read_threshold(f, "min_dtc", fc.min_dtc, -kInf);
        read_threshold(f, "min_lbg", fc.min_lbg, -kInf);
        if (f.contains("min_lbg_percent")) {
            double pct = 0.0;
            read(f, "min_lbg_percent", pct);
            fc.min_lbg = screen::lbg_ratio_from_percent(pct);
        }
        read_threshold(f, "max_la_usd", fc.max_la_usd, kInf);
        read_threshold(f, "min_adv_usd", fc.min_adv_usd, -kInf);
        read_threshold(f, "min_buy_rating", fc.min_buy_rating, -kInf);
        read_threshold(f, "min_beta", fc.min_beta, -kInf);
        read(f, "drop_bottom_pct", fc.drop_bottom_pct);
        read(f, "market_scale", fc.market_scale);
        read(f, "exclusion_list", fc.exclusion_list);
    }

    if (doc.contains("ranking")) {
        const auto& r = doc.at("ranking");
        require_object(r, "ranking");
        if (r.contains("score")) cfg.score_selector = parse_score_selector(r.at("score").get<std::string>());
    }

    if (doc.contains("portfolio")) {
        const auto& p = doc.at("portfolio");
        require_object(p, "portfolio");
        read(p, "top", cfg.portfolio.top);
        read(p, "cap", cfg.portfolio.cap);
        read(p, "rebalance_threshold", cfg.portfolio.rebalance_threshold);
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const RunConfig& base) {
    return parse_run_config(csv::read_file(path), base);
}

std::string to_json(const RunConfig& config) {
    const auto& sc = config.simulation;
    json vars = json::object();
    for (const auto& r : sc.ranges) {
        vars[std::string(sim::to_string(r.variable))] = {
            {"start_min", r.start.min}, {"start_max", r.start.max}, {"drift_min", r.drift.min},
            {"drift_max", r.drift.max}, {"vol_min", r.vol.min},     {"vol_max", r.vol.max}};
    }
    const auto& fc = config.filters;
    json doc = {
        {"simulation",
         {{"n_securities", sc.n_securities},
          {"n_days", sc.n_days},
          {"master_seed", sc.master_seed},
          {"start_date", sc.start_date.to_string()},
          {"dt", sc.dt},
          {"markets", sc.markets},
          {"buy_rating", interval(sc.buy_rating)},
          {"beta", interval(sc.beta)},
          {"variables", vars}}},
        {"scoring",
         {{"rf", config.scoring.rf},
          {"ma_window", config.scoring.ma_window},
          {"vol_window", config.scoring.vol_window},
          {"lbg_lag", config.scoring.lbg_lag},
          {"adv_window", config.scoring.adv_window},
          {"rate_source", std::string(scoring::to_string(config.scoring.rate_source))}}},
        {"filters",
         {{"min_si_usd", threshold(fc.min_si_usd)},
          {"min_loan_rate", threshold(fc.min_loan_rate)},
          {"min_dtc", threshold(fc.min_dtc)},
          {"min_lbg", threshold(fc.min_lbg)},
          {"max_la_usd", threshold(fc.max_la_usd)},
          {"min_adv_usd", threshold(fc.min_adv_usd)},
          {"min_buy_rating", threshold(fc.min_buy_rating)},
          {"min_beta", threshold(fc.min_beta)},
          {"drop_bottom_pct", fc.drop_bottom_pct},
          {"market_scale", fc.market_scale},
          {"exclusion_list", fc.exclusion_list}}},
        {"ranking", {{"score", std::string(score_selector_name(config.score_selector))}}},
        {"portfolio",
         {{"top", config.portfolio.top},
          {"cap", config.portfolio.cap},
          {"rebalance_threshold", config.portfolio.rebalance_threshold}}},
    };
    return doc.dump(2) + "\n";
}

}  // namespace bounce::app
