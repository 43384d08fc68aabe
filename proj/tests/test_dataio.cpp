#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "copinfo/dataio.hpp"
#include "copinfo/errors.hpp"
#include "doctest.h"

using namespace copinfo;

namespace {

// Binary mode so CRLF fixtures survive on every platform.
std::string write_file(const std::string& name, const std::string& content) {
  const std::string path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

template <typename F>
std::string data_error(F&& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

bool is_nan(double v) { return std::isnan(v); }

}  // namespace

TEST_SUITE("dataio") {

TEST_CASE("panel parsing with missing cells and CRLF endings") {
  const std::string path = write_file(
      "panel_ok.csv",
      "date,AAA_open,AAA_close,BBB_open,BBB_close\r\n"
      "2024-01-02,100,110,50,51\r\n"
      "2024-01-03,110,,52,50\r\n"
      "\r\n"
      "2024-01-04,+105.5,105.5,na,49\r\n"
      "2024-01-05,104,108,48,NaN\r\n");
  const PricePanel p = read_price_panel(path);
  REQUIRE(p.tickers == std::vector<std::string>{"AAA", "BBB"});
  REQUIRE(p.dates.size() == 4);
  CHECK(p.dates.front() == "2024-01-02");
  CHECK(p.dates.back() == "2024-01-05");
  CHECK(p.open[0][0] == 100.0);
  CHECK(p.close[0][1] == 51.0);
  CHECK(is_nan(p.close[1][0]));  // empty cell
  CHECK(p.open[2][0] == 105.5);  // leading plus accepted
  CHECK(is_nan(p.open[2][1]));   // na
  CHECK(is_nan(p.close[3][1]));  // NaN token
  CHECK(p.close[3][0] == 108.0);
}

TEST_CASE("panel header validation") {
  const char* bad_headers[] = {
      "time,AAA_open,AAA_close\n2024-01-02,1,2\n",
      "date,AAA_open\n2024-01-02,1\n",
      "date,AAA_open,AAA_close,BBB_open\n2024-01-02,1,2,3\n",
      "date,AAA_close,AAA_open\n2024-01-02,1,2\n",
      "date,AAA_open,BBB_close\n2024-01-02,1,2\n",
      "date,_open,_close\n2024-01-02,1,2\n",
      "date,AAA_open,AAA_close,AAA_open,AAA_close\n2024-01-02,1,2,3,4\n",
  };
  int i = 0;
  for (const char* content : bad_headers) {
    const std::string path =
        write_file("panel_hdr_" + std::to_string(i++) + ".csv", content);
    CAPTURE(content);
    CHECK_THROWS_AS(read_price_panel(path), DataError);
  }
  const std::string dup = write_file(
      "panel_dup.csv",
      "date,AAA_open,AAA_close,AAA_open,AAA_close\n2024-01-02,1,2,3,4\n");
  CHECK(data_error([&] { read_price_panel(dup); }).find("duplicate ticker AAA") !=
        std::string::npos);
}

TEST_CASE("panel row errors name the line") {
  const std::string short_row = write_file(
      "panel_short.csv",
      "date,AAA_open,AAA_close\n2024-01-02,1,2\n2024-01-03,1\n");
  const std::string msg1 = data_error([&] { read_price_panel(short_row); });
  CHECK(msg1.find(":3:") != std::string::npos);
  CHECK(msg1.find("expected 3 cells") != std::string::npos);

  const std::string stale_date = write_file(
      "panel_dates.csv",
      "date,AAA_open,AAA_close\n2024-01-03,1,2\n2024-01-03,1,2\n");
  CHECK(data_error([&] { read_price_panel(stale_date); })
            .find("strictly increasing") != std::string::npos);

  const std::string bad_number = write_file(
      "panel_badnum.csv",
      "date,AAA_open,AAA_close\n2024-01-02,1,2\n2024-01-03,12x,2\n");
  const std::string msg2 = data_error([&] { read_price_panel(bad_number); });
  CHECK(msg2.find(":3:") != std::string::npos);
  CHECK(msg2.find("bad number `12x`") != std::string::npos);

  const std::string negative = write_file(
      "panel_neg.csv",
      "date,AAA_open,AAA_close\n2024-01-02,1,2\n2024-01-03,-4,2\n");
  const std::string msg3 = data_error([&] { read_price_panel(negative); });
  CHECK(msg3.find("non-positive price for AAA on 2024-01-03") !=
        std::string::npos);

  CHECK_THROWS_AS(read_price_panel("/nonexistent/panel.csv"), DataError);
  const std::string empty = write_file("panel_empty.csv", "");
  CHECK(data_error([&] { read_price_panel(empty); }).find("empty file") !=
        std::string::npos);
}

TEST_CASE("returns in both modes") {
  const std::string path = write_file(
      "panel_ret.csv",
      "date,AAA_open,AAA_close,BBB_open,BBB_close\n"
      "2024-01-02,100,110,50,51\n"
      "2024-01-03,110,,52,50\n"
      "2024-01-04,105.5,105.5,na,49\n"
      "2024-01-05,104,108,48,na\n");
  const PricePanel p = read_price_panel(path);

  const ReturnPanel co = ingest_returns(p, ReturnMode::close_over_open);
  CHECK(co.returns[0][0] == doctest::Approx(std::log(1.1)).epsilon(1e-15));
  CHECK(co.returns[0][1] == doctest::Approx(std::log(51.0 / 50.0)).epsilon(1e-15));
  CHECK(is_nan(co.returns[1][0]));        // close missing
  CHECK(co.returns[2][0] == 0.0);         // open == close, exactly zero
  CHECK(is_nan(co.returns[2][1]));        // open missing
  CHECK(is_nan(co.returns[3][1]));        // close missing

  const ReturnPanel cc = ingest_returns(p, ReturnMode::close_over_prev_close);
  CHECK(is_nan(cc.returns[0][0]));  // no previous close on the first date
  CHECK(is_nan(cc.returns[0][1]));
  CHECK(cc.returns[1][1] == doctest::Approx(std::log(50.0 / 51.0)).epsilon(1e-15));
  CHECK(is_nan(cc.returns[1][0]));  // close missing
  CHECK(is_nan(cc.returns[2][0]));  // previous close missing
  CHECK(cc.returns[2][1] == doctest::Approx(std::log(49.0 / 50.0)).epsilon(1e-15));
  CHECK(cc.returns[3][0] ==
        doctest::Approx(std::log(108.0 / 105.5)).epsilon(1e-15));
  CHECK(is_nan(cc.returns[3][1]));
}

TEST_CASE("pairwise-complete extraction") {
  const std::string path = write_file(
      "panel_pairs.csv",
      "date,AAA_open,AAA_close,BBB_open,BBB_close\n"
      "2024-01-02,100,110,50,51\n"
      "2024-01-03,110,120,52,50\n"
      "2024-01-04,105.5,104,na,49\n"
      "2024-01-05,104,108,48,47\n");
  const ReturnPanel rp =
      ingest_returns(read_price_panel(path), ReturnMode::close_over_open);
  const SamplePairs s = complete_pairs(rp, 0, 1);
  REQUIRE(s.size() == 3);  // 2024-01-04 drops: BBB open missing
  CHECK(s.x[0] == doctest::Approx(std::log(1.1)).epsilon(1e-15));
  CHECK(s.y[2] == doctest::Approx(std::log(47.0 / 48.0)).epsilon(1e-15));
  CHECK_THROWS_AS(complete_pairs(rp, 0, 2), DataError);
  // Ordered pairs, same dates either way around.
  const SamplePairs r = complete_pairs(rp, 1, 0);
  CHECK(r.x == s.y);
  CHECK(r.y == s.x);
}

TEST_CASE("pair files in both delimiters") {
  const std::string csv = write_file("pair_csv.csv",
                                     "x,y\n"
                                     "1.5,2.5\n"
                                     "-0.25,1e-3\n");
  const SamplePairs a = read_pair_file(csv);
  REQUIRE(a.size() == 2);
  CHECK(a.x[0] == 1.5);
  CHECK(a.y[1] == 1e-3);

  const std::string ws = write_file("pair_ws.txt",
                                    "0.1   0.2\n"
                                    "\t0.3\t0.4\n"
                                    "\n"
                                    "0.5 0.6\n");
  const SamplePairs b = read_pair_file(ws);
  REQUIRE(b.size() == 3);
  CHECK(b.x[1] == 0.3);
  CHECK(b.y[2] == 0.6);
}

TEST_CASE("pair file rejections") {
  // A non-numeric line is only tolerated as a line-1 header.
  const std::string late_header = write_file("pair_late.csv",
                                             "1,2\n"
                                             "x,y\n");
  CHECK(data_error([&] { read_pair_file(late_header); }).find(":2:") !=
        std::string::npos);

  const std::string one_col = write_file("pair_one.csv", "header\n1.5\n");
  CHECK_THROWS_AS(read_pair_file(one_col), DataError);

  const std::string three_col = write_file("pair_three.csv", "1,2,3\n");
  CHECK_THROWS_AS(read_pair_file(three_col), DataError);

  const std::string non_finite = write_file("pair_inf.csv", "1,2\n3,inf\n");
  CHECK(data_error([&] { read_pair_file(non_finite); }).find("non-finite") !=
        std::string::npos);

  const std::string header_only = write_file("pair_hdr.csv", "x,y\n");
  CHECK(data_error([&] { read_pair_file(header_only); }).find("no data rows") !=
        std::string::npos);

  const std::string empty = write_file("pair_empty.csv", "");
  CHECK_THROWS_AS(read_pair_file(empty), DataError);
  CHECK_THROWS_AS(read_pair_file("/nonexistent/pair.csv"), DataError);
}

}  // TEST_SUITE
