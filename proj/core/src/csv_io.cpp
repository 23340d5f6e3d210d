#include "bounce/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "bounce/errors.hpp"

namespace bounce::csv {

namespace fs = std::filesystem;

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // folds -0.0
    char buf[512];
    auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (result.ec != std::errc{}) {
        // Fixed notation of values near DBL_MAX overflows the buffer.
        result = std::to_chars(buf, buf + sizeof buf, value);
    }
    return std::string(buf, result.ptr);
}

double parse_number(std::string_view text, std::string_view context) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw ValueError(std::string(context) + ": cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

namespace {

void check_id(const std::string& id) {
    if (id.empty() || id.find_first_of(",\r\n") != std::string::npos) {
        throw ValueError("security_id '" + id + "' is empty or contains a separator");
    }
}

struct LineReader {
    explicit LineReader(const fs::path& path) : path_(path), in_(path) {
        if (!in_) throw IoError("cannot open " + path.string());
    }

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::string where() const { return path_.filename().string() + " line " + std::to_string(line_no_); }

    fs::path path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
};

void check_header(LineReader& reader, std::string_view expected) {
    std::string header;
    if (!reader.next(header)) {
        throw SchemaError(reader.path_.filename().string() + ": missing header");
    }
    if (header == expected) return;
    const auto want = split_line(expected);
    const auto got = split_line(header);
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (i >= got.size()) {
            throw SchemaError(reader.where() + ": missing column '" + std::string(want[i]) + "'");
        }
        if (got[i] != want[i]) {
            throw SchemaError(reader.where() + ": expected column '" + std::string(want[i]) +
                              "' at position " + std::to_string(i + 1) + ", found '" +
                              std::string(got[i]) + "'");
        }
    }
    throw SchemaError(reader.where() + ": unexpected extra column '" +
                      std::string(got[want.size()]) + "'");
}

}  // namespace

std::string observations_to_string(const Dataset& dataset) {
    std::string out(kObservationsHeader);
    out += '\n';
    for (const auto& s : dataset.series) {
        check_id(s.security_id);
        for (const auto& o : s.observations) {
            out += o.date.to_string();
            out += ',';
            out += o.security_id;
            for (double v : {o.price, o.availability, o.short_interest, o.volume, o.loan_balance,
                             o.loan_rate, o.alt_loan_rate}) {
                out += ',';
                out += format_number(v);
            }
            out += '\n';
        }
    }
    return out;
}

std::string profiles_to_string(const Dataset& dataset) {
    std::string out(kProfilesHeader);
    out += '\n';
    for (const auto& p : dataset.profiles) {
        check_id(p.security_id);
        if (p.market.find_first_of(",\r\n") != std::string::npos) {
            throw ValueError("market code for '" + p.security_id + "' contains a separator");
        }
        out += p.security_id + ',' + p.market + ',' + format_number(p.buy_rating) + ',' +
               format_number(p.beta) + '\n';
    }
    return out;
}

Dataset ingest(const fs::path& observations_path, const fs::path& profiles_path) {
    Dataset dataset;

    std::map<std::string, SecuritySeries> by_id;
    {
        LineReader reader(observations_path);
        check_header(reader, kObservationsHeader);
        std::string line;
        while (reader.next(line)) {
            if (line.empty()) continue;
            const auto f = split_line(line);
            if (f.size() != 9) {
                throw SchemaError(reader.where() + ": expected 9 fields, found " +
                                  std::to_string(f.size()));
            }
            const auto where = reader.where();
            LendingObservation obs;
            try {
                obs.date = Date::parse(f[0]);
            } catch (const ValueError& e) {
                throw ValueError(where + ": " + e.what());
            }
            obs.security_id = std::string(f[1]);
            if (obs.security_id.empty()) throw ValueError(where + ": empty security_id");
            obs.price = parse_number(f[2], where);
            obs.availability = parse_number(f[3], where);
            obs.short_interest = parse_number(f[4], where);
            obs.volume = parse_number(f[5], where);
            obs.loan_balance = parse_number(f[6], where);
            obs.loan_rate = parse_number(f[7], where);
            obs.alt_loan_rate = parse_number(f[8], where);
            if (auto msg = check_observation(obs)) throw ValueError(where + ": " + *msg);

            auto& series = by_id[obs.security_id];
            series.security_id = obs.security_id;
            if (!series.empty() && !(series.observations.back().date < obs.date)) {
                throw OrderError(where + ": date " + obs.date.to_string() +
                                 " does not follow " + series.observations.back().date.to_string() +
                                 " for '" + obs.security_id + "'");
            }
            series.observations.push_back(std::move(obs));
        }
    }
    for (auto& [id, series] : by_id) dataset.series.push_back(std::move(series));

    {
        LineReader reader(profiles_path);
        check_header(reader, kProfilesHeader);
        std::string line;
        while (reader.next(line)) {
            if (line.empty()) continue;
            const auto f = split_line(line);
            if (f.size() != 4) {
                throw SchemaError(reader.where() + ": expected 4 fields, found " +
                                  std::to_string(f.size()));
            }
            const auto where = reader.where();
            SecurityProfile p;
            p.security_id = std::string(f[0]);
            p.market = std::string(f[1]);
            p.buy_rating = parse_number(f[2], where);
            p.beta = parse_number(f[3], where);
            if (!(p.buy_rating >= 1.0 && p.buy_rating <= 5.0)) {
                throw ValueError(where + ": buy_rating outside [1, 5]");
            }
            if (!by_id.contains(p.security_id)) {
                throw ValueError(where + ": profile for '" + p.security_id +
                                 "' has no observations");
            }
            dataset.profiles.push_back(std::move(p));
        }
    }
    canonicalize(dataset);
    for (std::size_t i = 1; i < dataset.profiles.size(); ++i) {
        if (dataset.profiles[i - 1].security_id == dataset.profiles[i].security_id) {
            throw ValueError("duplicate profile for '" + dataset.profiles[i].security_id + "'");
        }
    }
    for (const auto& s : dataset.series) {
        if (!dataset.find_profile(s.security_id)) {
            throw ValueError("no profile for security '" + s.security_id + "'");
        }
    }
    validate(dataset);
    return dataset;
}

Dataset ingest_dir(const fs::path& dir) {
    return ingest(dir / kObservationsFile, dir / kProfilesFile);
}

void export_dir(const Dataset& dataset, const fs::path& dir) {
    write_files_atomic({{dir / kObservationsFile, observations_to_string(dataset)},
                        {dir / kProfilesFile, profiles_to_string(dataset)}});
}

std::vector<std::string> read_id_list(const fs::path& path) {
    LineReader reader(path);
    check_header(reader, "security_id");
    std::vector<std::string> ids;
    std::string line;
    while (reader.next(line)) {
        if (!line.empty()) ids.push_back(line);
    }
    return ids;
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    write_files_atomic({{path, std::string(contents)}});
}

void write_files_atomic(const std::vector<std::pair<fs::path, std::string>>& files) {
    std::vector<fs::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& [path, contents] : files) {
        if (path.has_parent_path()) {
            std::error_code ec;
            fs::create_directories(path.parent_path(), ec);
        }
        fs::path tmp = path;
        tmp += ".tmp";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.close();
        if (!out) {
            cleanup();
            throw IoError("cannot write " + path.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        fs::rename(temps[i], files[i].first, ec);
        if (ec) {
            cleanup();
            throw IoError("cannot rename into " + files[i].first.string() + ": " + ec.message());
        }
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace bounce::csv
