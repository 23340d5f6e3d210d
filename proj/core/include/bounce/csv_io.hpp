#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bounce/dataset.hpp"

namespace bounce::csv {

inline constexpr std::string_view kObservationsHeader =
    "date,security_id,price,availability,short_interest,volume,loan_balance,loan_rate,alt_loan_rate";
inline constexpr std::string_view kProfilesHeader = "security_id,market,buy_rating,beta";
inline constexpr std::string_view kObservationsFile = "observations.csv";
inline constexpr std::string_view kProfilesFile = "profiles.csv";

/// Shortest fixed-notation decimal that parses back to the same double.
/// Non-finite values are written as nan, inf and -inf.
std::string format_number(double value);

/// Strict parse of a number written by format_number (or any plain decimal).
/// Throws ValueError naming `context` on failure.
double parse_number(std::string_view text, std::string_view context);

std::vector<std::string_view> split_line(std::string_view line);

std::string observations_to_string(const Dataset& dataset);
std::string profiles_to_string(const Dataset& dataset);

/// Reads observations.csv and profiles.csv. Errors name the offending file
/// and line number (header is line 1).
Dataset ingest(const std::filesystem::path& observations_path,
               const std::filesystem::path& profiles_path);

/// ingest() on the two canonical file names inside `dir`.
Dataset ingest_dir(const std::filesystem::path& dir);

/// Writes both files into `dir` atomically (temp file then rename).
void export_dir(const Dataset& dataset, const std::filesystem::path& dir);

std::vector<std::string> read_id_list(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Writes several files, renaming only once every temp file is complete.
void write_files_atomic(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

std::string read_file(const std::filesystem::path& path);

}  // namespace bounce::csv
