#pragma once

// Real-data pipeline: minute price series to a block-structured sample of
// (log-return curve, next-block maximum log-return) pairs.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fepls/dataset.hpp"
#include "fepls/func_space.hpp"

namespace fepls {

// Minutes since 1970-01-01T00:00Z of an ISO-8601 date-time such as
// "2013-01-02T09:30", "2013-01-02 09:30:00" or "2013-01-02T09:30+09:00".
std::int64_t parse_timestamp(const std::string& text);

struct PriceSeries {
    std::string label;
    std::vector<std::int64_t> minutes;
    std::vector<double> prices;
};

// Reads a `timestamp,price` CSV. Rows with a missing or malformed price and
// non-increasing timestamps are rejected with their line number.
PriceSeries read_price_csv(const std::filesystem::path& path, const std::string& label);

struct ReturnSeries {
    // Timestamp of the later of the two prices.
    std::vector<std::int64_t> minutes;
    std::vector<double> values;
};

ReturnSeries log_returns(const PriceSeries& series);

struct BlockSample {
    Grid grid{1};
    std::vector<FunctionSample> X;
    std::vector<double> Y;
    // 1-based block numbers: X_i comes from block 2i-1, Y_i from block 2i.
    std::vector<std::size_t> covariate_block;
    std::vector<std::size_t> response_block;

    std::size_t size() const noexcept { return Y.size(); }
    Dataset to_dataset() const;
};

// Intersects the two return series on their timestamps, cuts the surviving
// minutes into consecutive blocks of d, and pairs the covariate returns of
// each odd block with the maximum response return of the following block.
BlockSample align_and_block(const PriceSeries& covariate, const PriceSeries& response, std::size_t d);

// Drops the m pairs with the largest responses, keeping the original order.
BlockSample remove_top_outliers(const BlockSample& sample, std::size_t m);

}  // namespace fepls
