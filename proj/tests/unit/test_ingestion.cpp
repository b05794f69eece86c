#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sparsevar/error.hpp"
#include "sparsevar/ingestion.hpp"
#include "sparsevar/random.hpp"

using namespace sparsevar;

namespace {

std::vector<DailyChunk> chunks_for(const std::vector<YearMonth>& months, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<DailyChunk> out;
  for (const auto& m : months) {
    DailyChunk c{m, {}};
    for (unsigned d = 0; d < days_in_month(m.year, m.month); ++d) c.values.push_back(std::floor(100.0 * rng.uniform()));
    out.push_back(c);
  }
  return out;
}

MonthlyIndex monthly(std::vector<double> weights, YearMonth first = {2021, 11}) {
  MonthlyIndex idx;
  YearMonth m = first;
  for (double w : weights) {
    idx.months.push_back(m);
    idx.weights.push_back(w);
    m = m.next();
  }
  return idx;
}

}  // namespace

TEST_CASE("rescale_gtrends: identity, half and zero weights") {
  const auto idx = monthly({100, 50, 0, 100});
  const auto chunks = chunks_for(idx.months, 3);
  const auto out = rescale_gtrends(chunks, idx);
  CHECK(out.rows() == 30 + 31 + 31 + 28);
  CHECK(out.dates.front() == parse_date("2021-11-01"));
  CHECK(out.dates.back() == parse_date("2022-02-28"));
  Index row = 0;
  for (std::size_t m = 0; m < chunks.size(); ++m) {
    for (double v : chunks[m].values) {
      CHECK(out.values(row, 0) == v * idx.weights[m] / 100.0);
      ++row;
    }
  }
}

TEST_CASE("rescale_gtrends: errors") {
  const auto idx = monthly({100, 80});
  auto chunks = chunks_for(idx.months, 1);
  CHECK_THROWS_AS(rescale_gtrends({chunks[0]}, idx), Error);
  chunks[1].values.pop_back();
  CHECK_THROWS_AS(rescale_gtrends(chunks, idx), Error);
  auto gap = idx;
  gap.months[1] = gap.months[1].next();
  CHECK_THROWS_AS(rescale_gtrends(chunks_for(gap.months, 1), gap), Error);
  auto bad = idx;
  bad.weights[0] = 101;
  CHECK_THROWS_AS(rescale_gtrends(chunks_for(idx.months, 1), bad), Error);
}

TEST_CASE("rescale_gtrends: homogeneous of degree one in the weights") {
  const auto idx = monthly({20, 40, 60});
  const auto chunks = chunks_for(idx.months, 8);
  auto scaled = idx;
  for (auto& w : scaled.weights) w *= 1.5;
  const auto a = rescale_gtrends(chunks, idx);
  const auto b = rescale_gtrends(chunks, scaled);
  CHECK(((b.values - 1.5 * a.values).cwiseAbs().maxCoeff()) <= 1e-12);
}

TEST_CASE("rescale_gtrends: monthly re-aggregation matches weight times chunk mean") {
  const auto idx = monthly({12.5, 100, 73, 41, 9, 66}, {2020, 1});
  const auto chunks = chunks_for(idx.months, 21);
  const auto out = rescale_gtrends(chunks, idx);
  Index row = 0;
  for (std::size_t m = 0; m < chunks.size(); ++m) {
    const auto len = static_cast<Index>(chunks[m].values.size());
    const double got = out.values.col(0).segment(row, len).mean();
    double chunk_mean = 0.0;
    for (double v : chunks[m].values) chunk_mean += v;
    chunk_mean /= static_cast<double>(len);
    const double expected = idx.weights[m] * chunk_mean / 100.0;
    CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    row += len;
  }
}

TEST_CASE("compound_normalize: hand values") {
  CHECK(compound_normalize(0.0) == 0.0);
  CHECK(compound_normalize(4.0) == doctest::Approx(4.0 / std::sqrt(31.0)).epsilon(1e-15));
  CHECK(std::abs(compound_normalize(4.0) - 0.718421) < 1e-6);
  CHECK(compound_normalize(1e6) < 1.0);
  CHECK(compound_normalize(1e6) > 0.999999);
  CHECK(compound_normalize(2.0, SentimentConfig{4.0}) == doctest::Approx(2.0 / std::sqrt(8.0)));
}

TEST_CASE("compound_normalize: bounded, odd and monotone on random inputs") {
  CounterRng rng(17);
  for (int i = 0; i < 20000; ++i) {
    const double x = 200.0 * (rng.uniform() - 0.5) * std::exp(1.5 * rng.normal());
    const double x2 = x + std::abs(x) * 1e-6 + 1e-9;
    const double y = compound_normalize(x);
    REQUIRE(std::abs(y) < 1.0);
    REQUIRE(compound_normalize(-x) == -y);
    REQUIRE(compound_normalize(x2) > y);
  }
}

TEST_CASE("daily_aggregate: means per day and fill policies") {
  const Date d0 = parse_date("2022-01-01");
  const DateRange window{d0, d0 + std::chrono::days{3}};
  std::vector<ScoredItem> items = {{d0, 4.0}, {d0, 0.0}, {d0 + std::chrono::days{1}, 4.0},
                                   {d0 + std::chrono::days{1}, -4.0}, {d0 + std::chrono::days{3}, 0.0},
                                   {d0 + std::chrono::days{9}, 100.0}};
  const auto zero = daily_aggregate(items, {}, window);
  CHECK(zero.rows() == 4);
  CHECK(zero.values(0, 0) == doctest::Approx(0.359210).epsilon(1e-6));
  CHECK(std::abs(zero.values(0, 0) - 0.5 * 4.0 / std::sqrt(31.0)) < 1e-15);
  CHECK(zero.values(1, 0) == 0.0);
  CHECK(zero.values(2, 0) == 0.0);
  CHECK(zero.values(3, 0) == 0.0);

  const auto carry = daily_aggregate({{d0, 4.0}}, {}, window, FillPolicy::CarryForward);
  CHECK(carry.values.col(0).isConstant(4.0 / std::sqrt(31.0)));

  std::vector<ScoredItem> neutral;
  for (int d = 0; d < 4; ++d) neutral.push_back({d0 + std::chrono::days{d}, 0.0});
  CHECK(daily_aggregate(neutral, {}, window).values.isZero());

  CHECK_THROWS_AS(daily_aggregate(items, {}, {d0, d0 - std::chrono::days{1}}), Error);
  CHECK_THROWS_AS(daily_aggregate(items, SentimentConfig{0.0}, window), Error);
}

TEST_CASE("timestamps map to UTC days") {
  CHECK(parse_timestamp_utc_day("2022-01-01T23:59:59Z") == parse_date("2022-01-01"));
  CHECK(parse_timestamp_utc_day("2022-01-01 00:00:00") == parse_date("2022-01-01"));
  CHECK(parse_timestamp_utc_day("2022-01-01T23:30:00-01:00") == parse_date("2022-01-02"));
  CHECK(parse_timestamp_utc_day("2022-01-01T00:30:00+02:00") == parse_date("2021-12-31"));
  CHECK(parse_timestamp_utc_day("2022-01-01T10:00:00.250+0000") == parse_date("2022-01-01"));
  CHECK_THROWS_AS(parse_timestamp_utc_day("2022-01-01"), Error);
  CHECK_THROWS_AS(parse_timestamp_utc_day("2022-01-01T25:00:00Z"), Error);
}

TEST_CASE("ingestion file loaders") {
  const auto dir = std::filesystem::temp_directory_path() / "sparsevar_ingest_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "trends");
  {
    std::ofstream f(dir / "items.csv");
    f << "timestamp,valence_sum\n2022-01-01T10:00:00Z,4\n2022-01-01T11:00:00Z,0\n2022-01-02T00:00:00Z,-1.5\n";
  }
  const auto items = read_scored_items(dir / "items.csv");
  REQUIRE(items.size() == 3);
  CHECK(items[2].day == parse_date("2022-01-02"));
  CHECK(items[2].valence_sum == -1.5);
  {
    std::ofstream f(dir / "trends" / "monthly.csv");
    f << "month,weight\n2022-01,100\n2022-02,50\n";
    std::ofstream jan(dir / "trends" / "2022-01.csv");
    jan << "date,value\n";
    for (int d = 1; d <= 31; ++d) jan << "2022-01-" << (d < 10 ? "0" : "") << d << ",40\n";
    std::ofstream feb(dir / "trends" / "2022-02.csv");
    feb << "date,value\n";
    for (int d = 1; d <= 28; ++d) feb << "2022-02-" << (d < 10 ? "0" : "") << d << ",40\n";
  }
  const auto [chunks, idx] = read_gtrends_dir(dir / "trends");
  const auto panel = rescale_gtrends(chunks, idx);
  CHECK(panel.rows() == 59);
  CHECK(panel.values(0, 0) == 40.0);
  CHECK(panel.values(58, 0) == 20.0);
  std::filesystem::remove_all(dir);
}
