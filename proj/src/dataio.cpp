#include "copinfo/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "copinfo/errors.hpp"

namespace copinfo {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_missing_token(std::string_view t) {
  if (t.empty()) return true;
  std::string lower(t);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "na" || lower == "nan" || lower == "null";
}

bool parse_double(std::string_view t, double& out) {
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
}

// Strips a trailing carriage return so CRLF files parse cleanly.
std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

PricePanel read_price_panel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  ++line_no;

  const auto header = split_csv(strip_cr(line));
  if (header.size() < 3 || header[0] != "date") {
    fail_line(path, line_no, "header must start `date,<ticker>_open,<ticker>_close,...`");
  }
  if (header.size() % 2 == 0) {
    fail_line(path, line_no, "expected an open and a close column per ticker");
  }

  PricePanel panel;
  std::set<std::string, std::less<>> seen;
  for (std::size_t c = 1; c < header.size(); c += 2) {
    const std::string_view oc = header[c];
    const std::string_view cc = header[c + 1];
    if (!oc.ends_with("_open") || !cc.ends_with("_close")) {
      fail_line(path, line_no, "columns must alternate <ticker>_open,<ticker>_close");
    }
    const std::string_view name = oc.substr(0, oc.size() - 5);
    if (name.empty() || name != cc.substr(0, cc.size() - 6)) {
      fail_line(path, line_no, "open/close ticker names disagree near column " +
                                   std::to_string(c + 1));
    }
    if (!seen.insert(std::string(name)).second) {
      fail_line(path, line_no, "duplicate ticker " + std::string(name));
    }
    panel.tickers.emplace_back(name);
  }

  const std::size_t width = header.size();
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_cr(line);
    if (trim(row).empty()) continue;
    const auto cells = split_csv(row);
    if (cells.size() != width) {
      fail_line(path, line_no, "expected " + std::to_string(width) +
                                   " cells, got " + std::to_string(cells.size()));
    }
    const std::string date(cells[0]);
    if (date.empty()) fail_line(path, line_no, "empty date");
    if (!panel.dates.empty() && date <= panel.dates.back()) {
      fail_line(path, line_no, "dates must be strictly increasing (" + date +
                                   " after " + panel.dates.back() + ")");
    }
    panel.dates.push_back(date);
    panel.open.emplace_back(panel.tickers.size(), kMissing);
    panel.close.emplace_back(panel.tickers.size(), kMissing);
    for (std::size_t c = 1; c < width; ++c) {
      if (is_missing_token(cells[c])) continue;
      double v = 0.0;
      if (!parse_double(cells[c], v) || !std::isfinite(v)) {
        fail_line(path, line_no, "bad number `" + std::string(cells[c]) + "`");
      }
      const std::size_t t = (c - 1) / 2;
      if (v <= 0.0) {
        fail_line(path, line_no, "non-positive price for " + panel.tickers[t] +
                                     " on " + date);
      }
      ((c - 1) % 2 == 0 ? panel.open : panel.close).back()[t] = v;
    }
  }
  return panel;
}

ReturnPanel ingest_returns(const PricePanel& panel, ReturnMode mode) {
  ReturnPanel out;
  out.tickers = panel.tickers;
  out.dates = panel.dates;
  const std::size_t rows = panel.dates.size();
  const std::size_t cols = panel.tickers.size();
  out.returns.assign(rows, std::vector<double>(cols, kMissing));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t t = 0; t < cols; ++t) {
      const double close = panel.close[r][t];
      if (!std::isfinite(close)) continue;
      if (mode == ReturnMode::close_over_open) {
        const double open = panel.open[r][t];
        if (std::isfinite(open)) out.returns[r][t] = std::log(close / open);
      } else {
        if (r == 0) continue;
        const double prev = panel.close[r - 1][t];
        if (std::isfinite(prev)) out.returns[r][t] = std::log(close / prev);
      }
    }
  }
  return out;
}

SamplePairs complete_pairs(const ReturnPanel& panel, std::size_t a,
                           std::size_t b) {
  if (a >= panel.tickers.size() || b >= panel.tickers.size()) {
    throw DataError("complete_pairs: ticker index out of range");
  }
  SamplePairs s;
  for (std::size_t r = 0; r < panel.dates.size(); ++r) {
    const double x = panel.returns[r][a];
    const double y = panel.returns[r][b];
    if (std::isfinite(x) && std::isfinite(y)) {
      s.x.push_back(x);
      s.y.push_back(y);
    }
  }
  return s;
}

SamplePairs read_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  SamplePairs s;
  std::string line;
  std::size_t line_no = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(strip_cr(line));
    if (row.empty()) continue;

    std::vector<std::string_view> cells;
    if (row.find(',') != std::string_view::npos) {
      cells = split_csv(row);
    } else {
      std::size_t i = 0;
      while (i < row.size()) {
        while (i < row.size() &&
               std::isspace(static_cast<unsigned char>(row[i]))) {
          ++i;
        }
        std::size_t j = i;
        while (j < row.size() &&
               !std::isspace(static_cast<unsigned char>(row[j]))) {
          ++j;
        }
        if (j > i) cells.push_back(row.substr(i, j - i));
        i = j;
      }
    }

    double x = 0.0, y = 0.0;
    const bool numeric = cells.size() == 2 && parse_double(cells[0], x) &&
                         parse_double(cells[1], y);
    if (!numeric) {
      // A single non-numeric line before any data is a header.
      if (!saw_data && line_no == 1) continue;
      fail_line(path, line_no, "expected two numeric columns");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
      fail_line(path, line_no, "non-finite value");
    }
    s.x.push_back(x);
    s.y.push_back(y);
    saw_data = true;
  }
  if (!saw_data) throw DataError(path + ": no data rows");
  return s;
}

}  // namespace copinfo
