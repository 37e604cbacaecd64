#pragma once

// Price ingestion, log returns and realized-variance construction.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rvf/series.hpp"

namespace rvf {

/// Error raised while reading a CSV; `line()` is 1-based and counts the header.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline void validate(const PriceSeries& p) {
    if (p.timestamps.size() != p.prices.size())
        throw std::invalid_argument("price series: timestamp/price length mismatch");
    if (p.size() < 2) throw std::invalid_argument("price series needs at least 2 observations");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p.prices[i] > 0.0) || !std::isfinite(p.prices[i]))
            throw DomainError("non-positive price at index " + std::to_string(i), i);
        if (i > 0 && p.timestamps[i] <= p.timestamps[i - 1])
            throw DomainError("timestamps not strictly increasing at index " + std::to_string(i), i);
    }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view s, std::size_t line) {
    const std::string tmp(trim(s));
    if (tmp.empty()) throw CsvError("empty numeric field", line);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || !std::isfinite(v))
        throw CsvError("non-numeric value '" + tmp + "'", line);
    return v;
}

} // namespace detail

/// Reads `timestamp,price` CSV (header required). Duplicate or decreasing
/// timestamps are errors; nothing is silently dropped.
inline PriceSeries read_price_csv(std::istream& in, Frequency frequency) {
    PriceSeries out;
    out.frequency = frequency;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw CsvError("missing header", 1);
    ++line_no;
    {
        auto header = detail::trim(line);
        if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header.remove_prefix(3);
        if (header != "timestamp,price") throw CsvError("expected header 'timestamp,price'", line_no);
    }
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = detail::trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw CsvError("expected 2 fields", line_no);
        Timestamp ts;
        try {
            ts = parse_timestamp(detail::trim(row.substr(0, comma)));
        } catch (const std::invalid_argument& e) {
            throw CsvError(e.what(), line_no);
        }
        const double price = detail::parse_number(row.substr(comma + 1), line_no);
        if (!(price > 0.0)) throw CsvError("non-positive price", line_no);
        if (!out.timestamps.empty()) {
            if (ts == out.timestamps.back()) throw CsvError("duplicate timestamp", line_no);
            if (ts < out.timestamps.back()) throw CsvError("timestamp goes backwards", line_no);
        }
        out.timestamps.push_back(ts);
        out.prices.push_back(price);
    }
    if (out.size() < 2) throw CsvError("need at least 2 price rows", line_no);
    return out;
}

inline PriceSeries read_price_csv(const std::string& path, Frequency frequency) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_price_csv(in, frequency);
}

inline void write_rv_csv(std::ostream& out, const RvSeries& rv) {
    const bool date_only = rv.frequency == Frequency::daily;
    out << "timestamp,rv\n";
    for (std::size_t i = 0; i < rv.size(); ++i)
        out << format_timestamp(rv.timestamps[i], date_only) << ',' << format_double(rv.values[i]) << '\n';
}

/// r[i] = ln(p[i+1] / p[i]), stamped at the later price.
inline ReturnSeries log_returns(const PriceSeries& prices) {
    validate(prices);
    ReturnSeries out;
    out.frequency = prices.frequency;
    out.timestamps.assign(prices.timestamps.begin() + 1, prices.timestamps.end());
    out.values.resize(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i)
        out.values[i] = std::log(prices.prices[i + 1] / prices.prices[i]);
    return out;
}

/// Daily RV with one return per bucket: the squared return.
inline RvSeries rv_from_squared_returns(const ReturnSeries& returns) {
    RvSeries out;
    out.frequency = returns.frequency;
    out.timestamps = returns.timestamps;
    out.values.resize(returns.size());
    std::transform(returns.values.begin(), returns.values.end(), out.values.begin(),
                   [](double r) { return r * r; });
    out.samples_per_bucket = 1;
    return out;
}

namespace detail {

/// Buckets are (k*b, (k+1)*b] on the epoch grid, so hour buckets sit on clock
/// hours. Only buckets that receive at least one return are emitted.
template <class Reduce>
ReturnSeries bucket_reduce(const ReturnSeries& returns, std::chrono::seconds bucket, Reduce reduce) {
    if (bucket.count() <= 0) throw std::invalid_argument("bucket must be positive");
    if (returns.size() == 0) throw std::invalid_argument("cannot bucket an empty return series");
    if (returns.size() >= 2) {
        auto min_step = returns.timestamps[1] - returns.timestamps[0];
        for (std::size_t i = 2; i < returns.size(); ++i)
            min_step = std::min(min_step, returns.timestamps[i] - returns.timestamps[i - 1]);
        if (bucket < min_step) throw std::invalid_argument("bucket finer than the sampling frequency");
        if (bucket > (returns.timestamps.back() - returns.timestamps.front()) + min_step)
            throw std::invalid_argument("bucket coarser than the whole series");
    }
    const auto b = bucket.count();
    auto bucket_of = [b](Timestamp t) {
        const auto s = t.time_since_epoch().count() - 1;
        return s >= 0 ? s / b : -((-s + b - 1) / b);
    };
    ReturnSeries out;
    out.frequency = returns.frequency;
    std::size_t i = 0;
    while (i < returns.size()) {
        const auto k = bucket_of(returns.timestamps[i]);
        double acc = 0.0;
        std::size_t j = i;
        for (; j < returns.size() && bucket_of(returns.timestamps[j]) == k; ++j) acc = reduce(acc, returns.values[j]);
        out.timestamps.push_back(Timestamp{std::chrono::seconds{(k + 1) * b}});
        out.values.push_back(acc);
        i = j;
    }
    return out;
}

} // namespace detail

/// Sum of squared returns per clock-aligned bucket, stamped at bucket close.
inline RvSeries rv_aggregate(const ReturnSeries& returns, std::chrono::seconds bucket) {
    auto summed = detail::bucket_reduce(returns, bucket, [](double acc, double r) { return acc + r * r; });
    RvSeries out;
    out.timestamps = std::move(summed.timestamps);
    out.values = std::move(summed.values);
    out.frequency = bucket == std::chrono::hours{1} ? Frequency::hourly
                    : bucket == std::chrono::hours{24} ? Frequency::daily
                                                       : returns.frequency;
    const auto native = returns.size() >= 2 ? returns.timestamps[1] - returns.timestamps[0] : bucket;
    out.samples_per_bucket = static_cast<std::size_t>(std::max<std::int64_t>(1, bucket / native));
    return out;
}

/// Bucket log return (sum of intra-bucket log returns), aligned with rv_aggregate.
inline ReturnSeries return_aggregate(const ReturnSeries& returns, std::chrono::seconds bucket) {
    auto out = detail::bucket_reduce(returns, bucket, [](double acc, double r) { return acc + r; });
    if (bucket == std::chrono::hours{1}) out.frequency = Frequency::hourly;
    return out;
}

template <class Series>
struct SplitSpec {
    double train_fraction = 0.7;
    Series train;
    Series test;
};

/// Hold-out split: the first floor(fraction * n) observations train, the rest test.
template <class Series>
SplitSpec<Series> split(const Series& series, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0, 1)");
    const std::size_t n = series.size();
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));
    if (n_train < 2) throw std::invalid_argument("training segment shorter than 2 observations");
    if (n_train >= n) throw std::invalid_argument("test segment is empty");
    return {train_fraction, slice(series, 0, n_train), slice(series, n_train, n)};
}

} // namespace rvf
