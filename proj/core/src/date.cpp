#include "bounce/date.hpp"

#include <charconv>
#include <cstdio>

#include "bounce/errors.hpp"

namespace bounce {

namespace {

bool parse_uint(std::string_view text, unsigned& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date Date::parse(std::string_view iso) {
    unsigned y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' || !parse_uint(iso.substr(0, 4), y) ||
        !parse_uint(iso.substr(5, 2), m) || !parse_uint(iso.substr(8, 2), d)) {
        throw ValueError("invalid ISO-8601 date '" + std::string(iso) + "'");
    }
    std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) throw ValueError("invalid calendar date '" + std::string(iso) + "'");
    return Date{std::chrono::sys_days{ymd}};
}

std::string Date::to_string() const {
    std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

bool Date::is_weekday() const {
    const auto wd = std::chrono::weekday{days_};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

Date Date::next_weekday() const {
    Date next{days_ + std::chrono::days{1}};
    while (!next.is_weekday()) next = Date{next.days_ + std::chrono::days{1}};
    return next;
}

}  // namespace bounce
