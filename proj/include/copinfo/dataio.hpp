#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "copinfo/rank.hpp"

namespace copinfo {

// Daily open/close prices for a set of tickers.  Cells may be missing
// (marked NaN); present cells hold positive prices.
struct PricePanel {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;  // strictly increasing

  // Row-major [date][ticker].
  std::vector<std::vector<double>> open;
  std::vector<std::vector<double>> close;
};

// Reads the documented panel format: header `date,<t>_open,<t>_close,...`,
// one row per date.  Empty, "na", "nan" or "null" cells are missing.
// Throws DataError naming the line on malformed input, duplicate or
// non-increasing dates, and non-positive prices.
PricePanel read_price_panel(const std::string& path);

enum class ReturnMode {
  close_over_open,        // r_t = ln(close_t / open_t)
  close_over_prev_close,  // r_t = ln(close_t / close_{t-1})
};

// Per-ticker daily log-returns aligned on the panel dates; NaN marks dates
// where the return is undefined (missing price, or the first row in
// close-over-prev-close mode).
struct ReturnPanel {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;
  std::vector<std::vector<double>> returns;  // [date][ticker]
};

ReturnPanel ingest_returns(const PricePanel& panel, ReturnMode mode);

// Pairwise-complete observations for tickers a and b, in date order.
SamplePairs complete_pairs(const ReturnPanel& panel, std::size_t a,
                           std::size_t b);

// Two numeric columns, comma or whitespace delimited, optional single
// header line.  Throws DataError naming the offending line otherwise.
SamplePairs read_pair_file(const std::string& path);

}  // namespace copinfo
