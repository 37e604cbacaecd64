#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rvf {

using Timestamp = std::chrono::sys_seconds;

enum class Frequency { daily, hourly, minute };

inline std::string_view to_string(Frequency f) {
    switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::hourly: return "hourly";
    case Frequency::minute: return "minute";
    }
    return "unknown";
}

inline Frequency parse_frequency(std::string_view s) {
    if (s == "daily") return Frequency::daily;
    if (s == "hourly") return Frequency::hourly;
    if (s == "minute") return Frequency::minute;
    throw std::invalid_argument("unknown frequency '" + std::string(s) + "'");
}

/// Thrown for inputs outside an operation's mathematical domain. Carries the
/// index of the offending element when there is one.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, std::size_t index)
        : std::domain_error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

struct PriceSeries {
    std::vector<Timestamp> timestamps;
    std::vector<double> prices;
    Frequency frequency = Frequency::daily;

    std::size_t size() const noexcept { return prices.size(); }
};

struct ReturnSeries {
    std::vector<Timestamp> timestamps;
    std::vector<double> values;
    Frequency frequency = Frequency::daily;

    std::size_t size() const noexcept { return values.size(); }
};

/// Realized variance per bucket. `samples_per_bucket` is the nominal number of
/// intra-bucket returns; 1 for daily squared-return RV.
struct RvSeries {
    std::vector<Timestamp> timestamps;
    std::vector<double> values;
    Frequency frequency = Frequency::daily;
    std::size_t samples_per_bucket = 1;

    std::size_t size() const noexcept { return values.size(); }
};

/// Contiguous sub-range [first, last) of a series, timestamps included.
template <class Series>
Series slice(const Series& s, std::size_t first, std::size_t last) {
    if (first > last || last > s.size()) throw std::out_of_range("slice bounds outside series");
    Series out = s;
    out.timestamps.assign(s.timestamps.begin() + first, s.timestamps.begin() + last);
    if constexpr (requires { s.prices; }) {
        out.prices.assign(s.prices.begin() + first, s.prices.begin() + last);
    } else {
        out.values.assign(s.values.begin() + first, s.values.begin() + last);
    }
    return out;
}

// ---- timestamps -------------------------------------------------------------

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace detail

/// Parses `YYYY-MM-DD`, optionally followed by `T` or a space and `HH:MM` or
/// `HH:MM:SS`, optionally terminated by `Z`. No timezone conversion is done.
inline Timestamp parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    auto fail = [&]() -> Timestamp {
        throw std::invalid_argument("malformed timestamp '" + std::string(s) + "'");
    };
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return fail();
    if (!detail::read_int(s, 0, 4, y) || !detail::read_int(s, 5, 2, mo) || !detail::read_int(s, 8, 2, d))
        return fail();
    std::size_t pos = 10;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        ++pos;
        if (!detail::read_int(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
            !detail::read_int(s, pos + 3, 2, mm))
            return fail();
        pos += 5;
        if (pos < s.size() && s[pos] == ':') {
            if (!detail::read_int(s, pos + 1, 2, ss)) return fail();
            pos += 3;
        }
    }
    if (pos < s.size() && s[pos] == 'Z') ++pos;
    if (pos != s.size()) return fail();
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) return fail();
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

/// Date-only output when the instant falls on midnight and `date_only_if_midnight`.
inline std::string format_timestamp(Timestamp t, bool date_only_if_midnight = true) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const hh_mm_ss<seconds> tod{t - day_start};
    char buf[32];
    if (date_only_if_midnight && tod.to_duration().count() == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                      unsigned(ymd.day()));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", int(ymd.year()),
                      unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                      int(tod.minutes().count()), int(tod.seconds().count()));
    }
    return buf;
}

/// Full round-trip precision for doubles in CSV output.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace rvf
