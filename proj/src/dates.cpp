#include "varkit/dates.hpp"

#include "varkit/errors.hpp"

#include <charconv>

namespace varkit {

namespace {

// Civil-date conversion via the standard days-from-civil algorithm.
int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

struct Civil {
    int y;
    unsigned m;
    unsigned d;
};

Civil civil_from_days(int z) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), m, d};
}

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("bad date field '" + std::string(s) + "'");
    return v;
}

} // namespace

Date::Date(int year, int month, int day) {
    if (month < 1 || month > 12)
        throw ValidationError("month out of range: " + std::to_string(month));
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    const int dmax = mdays[month - 1] + (month == 2 && leap ? 1 : 0);
    if (day < 1 || day > dmax)
        throw ValidationError("day out of range for " + std::to_string(year) + "-" +
                              std::to_string(month) + ": " + std::to_string(day));
    serial_ = days_from_civil(year, month, day);
}

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw ValidationError("date not in YYYY-MM-DD form: '" + std::string(iso) + "'");
    return Date(parse_int(iso.substr(0, 4)), parse_int(iso.substr(5, 2)),
                parse_int(iso.substr(8, 2)));
}

int Date::year() const { return civil_from_days(serial_).y; }
int Date::month() const { return static_cast<int>(civil_from_days(serial_).m); }
int Date::day() const { return static_cast<int>(civil_from_days(serial_).d); }

int Date::weekday() const {
    // serial 0 is 1970-01-01, a Thursday (index 3 with Monday = 0).
    int w = (serial_ + 3) % 7;
    return w < 0 ? w + 7 : w;
}

Date Date::next_business_day() const {
    Date d(serial_ + 1);
    while (!d.is_business_day()) d = Date(d.serial_ + 1);
    return d;
}

Date Date::prev_business_day() const {
    Date d(serial_ - 1);
    while (!d.is_business_day()) d = Date(d.serial_ - 1);
    return d;
}

Date Date::add_business_days(int n) const {
    Date d = *this;
    for (; n > 0; --n) d = d.next_business_day();
    for (; n < 0; ++n) d = d.prev_business_day();
    return d;
}

std::string Date::to_string() const {
    const Civil c = civil_from_days(serial_);
    char buf[11];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", c.y, c.m, c.d);
    return buf;
}

std::vector<Date> business_range(Date start, Date end) {
    if (start > end)
        throw ValidationError("business_range: start " + start.to_string() + " after end " +
                              end.to_string());
    std::vector<Date> out;
    for (int s = start.serial(); s <= end.serial(); ++s) {
        Date d(s);
        if (d.is_business_day()) out.push_back(d);
    }
    return out;
}

int business_days_between(Date a, Date b) {
    if (a > b) return -business_days_between(b, a);
    int n = 0;
    for (int s = a.serial() + 1; s <= b.serial(); ++s)
        if (Date(s).is_business_day()) ++n;
    return n;
}

} // namespace varkit
