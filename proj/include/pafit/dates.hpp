#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pafit {

// Calendar date stored as days since 1970-01-01 (can be negative).
struct Date {
    std::int64_t days = 0;

    friend auto operator<=>(const Date&, const Date&) = default;
};

// Howard Hinnant's civil-from-days / days-from-civil algorithms.
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

// Parses "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
inline Date parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw std::invalid_argument("bad date: '" + s + "'");
    auto num = [&](int pos, int len) {
        int v = 0;
        for (int i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("bad date: '" + s + "'");
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    int y = num(0, 4);
    int m = num(5, 2);
    int d = num(8, 2);
    if (m < 1 || m > 12 || d < 1 || d > 31)
        throw std::invalid_argument("bad date: '" + s + "'");
    return Date{days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d))};
}

inline std::string format_date(Date dt) {
    int y;
    unsigned m, d;
    civil_from_days(dt.days, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
    return buf;
}

// (year, month) pair, used for monthly period splits.
inline std::pair<int, unsigned> year_month(Date dt) {
    int y;
    unsigned m, d;
    civil_from_days(dt.days, y, m, d);
    return {y, m};
}

}  // namespace pafit
