#include "fepls/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fepls/errors.hpp"

namespace fepls {

namespace {

int parse_int(const std::string& text, std::size_t pos, std::size_t len, const std::string& whole) {
    if (pos + len > text.size()) throw ValidationError("malformed timestamp '" + whole + "'");
    int v = 0;
    const auto res = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (res.ec != std::errc() || res.ptr != text.data() + pos + len)
        throw ValidationError("malformed timestamp '" + whole + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::int64_t parse_timestamp(const std::string& raw) {
    const std::string text = trim(raw);
    // YYYY-MM-DD[T| ]HH:MM[:SS][Z|(+|-)HH:MM]
    if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':')
        throw ValidationError("malformed timestamp '" + text + "'");
    const int year = parse_int(text, 0, 4, text);
    const int month = parse_int(text, 5, 2, text);
    const int day = parse_int(text, 8, 2, text);
    const int hour = parse_int(text, 11, 2, text);
    const int minute = parse_int(text, 14, 2, text);
    std::size_t pos = 16;
    if (pos < text.size() && text[pos] == ':') {
        parse_int(text, pos + 1, 2, text);
        pos += 3;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
    }
    int offset = 0;
    if (pos < text.size()) {
        if (text[pos] == 'Z' && pos + 1 == text.size()) {
        } else if ((text[pos] == '+' || text[pos] == '-') && pos + 6 == text.size() && text[pos + 3] == ':') {
            const int sign = text[pos] == '+' ? 1 : -1;
            offset = sign * (60 * parse_int(text, pos + 1, 2, text) + parse_int(text, pos + 4, 2, text));
        } else {
            throw ValidationError("malformed timestamp '" + text + "'");
        }
    }
    const std::chrono::year_month_day ymd{std::chrono::year(year), std::chrono::month(static_cast<unsigned>(month)),
                                          std::chrono::day(static_cast<unsigned>(day))};
    if (!ymd.ok() || hour > 23 || minute > 59) throw ValidationError("invalid date-time '" + text + "'");
    const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 1440 + hour * 60 + minute - offset;
}

PriceSeries read_price_csv(const std::filesystem::path& path, const std::string& label) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path.string());
    PriceSeries series;
    series.label = label;
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestamp,price")
        throw ValidationError(path.string() + ":1: expected header 'timestamp,price'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError(where + "missing price");
        const std::string price_text = trim(line.substr(comma + 1));
        double price = 0.0;
        const auto res = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
        if (price_text.empty() || res.ec != std::errc() || res.ptr != price_text.data() + price_text.size())
            throw ValidationError(where + "missing or malformed price");
        std::int64_t minute = 0;
        try {
            minute = parse_timestamp(line.substr(0, comma));
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        }
        if (!series.minutes.empty() && minute <= series.minutes.back())
            throw ValidationError(where + "timestamps must be strictly increasing");
        series.minutes.push_back(minute);
        series.prices.push_back(price);
    }
    return series;
}

ReturnSeries log_returns(const PriceSeries& series) {
    if (series.prices.size() < 2) throw InsufficientDataError("log-returns need at least 2 prices");
    for (std::size_t i = 0; i < series.prices.size(); ++i)
        if (!(series.prices[i] > 0.0))
            throw DomainError("non-positive price at row " + std::to_string(i) + " of " + series.label);
    ReturnSeries out;
    out.minutes.reserve(series.prices.size() - 1);
    out.values.reserve(series.prices.size() - 1);
    for (std::size_t i = 1; i < series.prices.size(); ++i) {
        out.minutes.push_back(series.minutes[i]);
        out.values.push_back(std::log(series.prices[i] / series.prices[i - 1]));
    }
    return out;
}

Dataset BlockSample::to_dataset() const {
    Dataset data;
    data.grid = grid;
    data.X = X;
    data.Y = Y;
    return data;
}

BlockSample align_and_block(const PriceSeries& covariate, const PriceSeries& response, std::size_t d) {
    if (d == 0) throw DomainError("block length must be positive");
    const ReturnSeries a = log_returns(covariate);
    const ReturnSeries b = log_returns(response);

    std::vector<double> xa, xb;
    for (std::size_t i = 0, j = 0; i < a.minutes.size() && j < b.minutes.size();) {
        if (a.minutes[i] < b.minutes[j]) {
            ++i;
        } else if (b.minutes[j] < a.minutes[i]) {
            ++j;
        } else {
            xa.push_back(a.values[i++]);
            xb.push_back(b.values[j++]);
        }
    }
    const std::size_t pairs = xa.size() / (2 * d);
    if (pairs == 0)
        throw InsufficientDataError("shared minutes (" + std::to_string(xa.size()) + ") fewer than two blocks of " +
                                    std::to_string(d));

    BlockSample out;
    out.grid = Grid(d);
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto cov_begin = xa.begin() + static_cast<std::ptrdiff_t>(2 * i * d);
        out.X.emplace_back(out.grid, std::vector<double>(cov_begin, cov_begin + static_cast<std::ptrdiff_t>(d)));
        const auto resp_begin = xb.begin() + static_cast<std::ptrdiff_t>((2 * i + 1) * d);
        out.Y.push_back(*std::max_element(resp_begin, resp_begin + static_cast<std::ptrdiff_t>(d)));
        out.covariate_block.push_back(2 * i + 1);
        out.response_block.push_back(2 * i + 2);
    }
    return out;
}

BlockSample remove_top_outliers(const BlockSample& sample, std::size_t m) {
    const std::size_t n = sample.size();
    if (m >= n) throw DomainError("cannot remove " + std::to_string(m) + " of " + std::to_string(n) + " pairs");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample.Y[a] > sample.Y[b]; });
    std::vector<bool> drop(n, false);
    for (std::size_t j = 0; j < m; ++j) drop[order[j]] = true;

    BlockSample out;
    out.grid = sample.grid;
    for (std::size_t i = 0; i < n; ++i) {
        if (drop[i]) continue;
        out.X.push_back(sample.X[i]);
        out.Y.push_back(sample.Y[i]);
        out.covariate_block.push_back(sample.covariate_block[i]);
        out.response_block.push_back(sample.response_block[i]);
    }
    return out;
}

}  // namespace fepls
