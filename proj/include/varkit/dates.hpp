#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace varkit {

/// Calendar date backed by a serial day count (days since 1970-01-01).
/// The business calendar is weekday-only: Monday through Friday are
/// business days, no holiday list.
class Date {
public:
    Date() = default;
    explicit Date(int serial) : serial_(serial) {}
    Date(int year, int month, int day);

    /// Parses "YYYY-MM-DD". Throws ValidationError on malformed input or
    /// an impossible calendar date.
    static Date parse(std::string_view iso);

    int serial() const { return serial_; }
    int year() const;
    int month() const;
    int day() const;

    /// 0 = Monday ... 6 = Sunday.
    int weekday() const;
    bool is_business_day() const { return weekday() < 5; }

    Date next_business_day() const;
    Date prev_business_day() const;
    /// Moves |n| business days forward (n > 0) or backward (n < 0).
    Date add_business_days(int n) const;

    std::string to_string() const;

    auto operator<=>(const Date&) const = default;

private:
    int serial_ = 0;
};

/// All business days in [start, end], ascending. Throws ValidationError
/// if start > end.
std::vector<Date> business_range(Date start, Date end);

/// Number of business days strictly between a and b plus the endpoint b
/// when b is a business day, i.e. business-day steps from a to b (a < b).
int business_days_between(Date a, Date b);

} // namespace varkit
