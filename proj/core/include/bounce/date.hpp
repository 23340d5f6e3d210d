#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace bounce {

/// Calendar date with day resolution. Serialized as ISO-8601 (YYYY-MM-DD).
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                            std::chrono::day{d}}) {}

    /// Throws ValueError on anything but a valid YYYY-MM-DD string.
    static Date parse(std::string_view iso);

    std::string to_string() const;

    constexpr std::chrono::sys_days days() const { return days_; }
    bool is_weekday() const;

    /// Next Monday-to-Friday date strictly after this one.
    Date next_weekday() const;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;
    friend constexpr bool operator==(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace bounce
