#include "sparsevar/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "sparsevar/csv.hpp"
#include "sparsevar/error.hpp"

namespace sparsevar {

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
  return buf;
}

YearMonth parse_year_month(const std::string& text) {
  if (text.size() == 7 && text[4] == '-') {
    const Date d = parse_date(text + "-01");
    const std::chrono::year_month_day ymd{d};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
  }
  const std::chrono::year_month_day ymd{parse_date(text)};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

void MonthlyIndex::validate() const {
  if (months.size() != weights.size()) throw Error("monthly index: months and weights differ in length");
  if (months.empty()) throw Error("monthly index is empty");
  for (std::size_t i = 0; i < months.size(); ++i) {
    if (!(weights[i] >= 0.0 && weights[i] <= 100.0)) {
      throw Error("monthly weight for " + months[i].str() + " outside [0, 100]");
    }
    if (i > 0 && !(months[i] == months[i - 1].next())) {
      throw Error("monthly index not contiguous at " + months[i].str());
    }
  }
}

TimePanel rescale_gtrends(const std::vector<DailyChunk>& daily_chunks, const MonthlyIndex& monthly,
                          const std::string& series_name) {
  monthly.validate();
  std::vector<double> out_values;
  TimePanel out;
  out.names = {series_name};
  for (std::size_t m = 0; m < monthly.months.size(); ++m) {
    const YearMonth ym = monthly.months[m];
    const auto it = std::find_if(daily_chunks.begin(), daily_chunks.end(),
                                 [&](const DailyChunk& c) { return c.month == ym; });
    if (it == daily_chunks.end()) throw Error("missing daily chunk for month " + ym.str());
    const unsigned len = days_in_month(ym.year, ym.month);
    if (it->values.size() != len) {
      throw Error("daily chunk for " + ym.str() + " has " + std::to_string(it->values.size()) +
                  " values, calendar month has " + std::to_string(len));
    }
    const Date first = Date{std::chrono::year{ym.year} / std::chrono::month{ym.month} / std::chrono::day{1}};
    for (unsigned d = 0; d < len; ++d) {
      out.dates.push_back(first + std::chrono::days{d});
      out_values.push_back(it->values[d] * monthly.weights[m] / 100.0);
    }
  }
  out.values = Eigen::Map<Vector>(out_values.data(), static_cast<Index>(out_values.size()));
  out.validate_daily();
  return out;
}

void SentimentConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("sentiment alpha must be positive and finite");
}

double compound_normalize(double x, const SentimentConfig& cfg) {
  // x / sqrt(x^2 + alpha) overflows for |x| > ~1e154; the hypot form does not.
  return x / std::hypot(x, std::sqrt(cfg.alpha));
}

TimePanel daily_aggregate(const std::vector<ScoredItem>& items, const SentimentConfig& cfg, DateRange window,
                          FillPolicy fill, const std::string& series_name) {
  cfg.validate();
  if (window.last < window.first) throw Error("sentiment window is empty");
  const auto n_days = static_cast<std::size_t>((window.last - window.first).count() + 1);
  std::vector<double> sums(n_days, 0.0);
  std::vector<std::size_t> counts(n_days, 0);
  for (const auto& item : items) {
    if (item.day < window.first || item.day > window.last) continue;
    const auto d = static_cast<std::size_t>((item.day - window.first).count());
    sums[d] += compound_normalize(item.valence_sum, cfg);
    ++counts[d];
  }
  TimePanel out;
  out.names = {series_name};
  out.values.resize(static_cast<Index>(n_days), 1);
  double previous = 0.0;
  for (std::size_t d = 0; d < n_days; ++d) {
    out.dates.push_back(window.first + std::chrono::days{static_cast<int>(d)});
    double v = 0.0;
    if (counts[d] > 0) {
      v = sums[d] / static_cast<double>(counts[d]);
    } else if (fill == FillPolicy::CarryForward) {
      v = previous;
    }
    out.values(static_cast<Index>(d), 0) = v;
    previous = v;
  }
  return out;
}

std::vector<ScoredItem> read_scored_items(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto ts = table.column("timestamp");
  const auto vs = table.column("valence_sum");
  std::vector<ScoredItem> items;
  items.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const double v = csv::parse_double(row[vs], path.string() + " valence_sum at " + row[ts]);
    if (!std::isfinite(v)) throw Error(path.string() + ": non-finite valence_sum at " + row[ts]);
    items.push_back({parse_timestamp_utc_day(row[ts]), v});
  }
  return items;
}

MonthlyIndex read_monthly_index(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto mc = table.column("month");
  const auto wc = table.column("weight");
  MonthlyIndex idx;
  for (const auto& row : table.rows) {
    idx.months.push_back(parse_year_month(row[mc]));
    idx.weights.push_back(csv::parse_double(row[wc], path.string() + " weight for " + row[mc]));
  }
  idx.validate();
  return idx;
}

DailyChunk read_daily_chunk(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto dc = table.column("date");
  const auto vc = table.column("value");
  if (table.rows.empty()) throw Error(path.string() + ": no rows");
  DailyChunk chunk;
  chunk.month = parse_year_month(table.rows.front()[dc]);
  Date expected = parse_date(table.rows.front()[dc]);
  const std::chrono::year_month_day first{expected};
  if (first.day() != std::chrono::day{1}) throw Error(path.string() + ": chunk must start on day 1 of its month");
  for (const auto& row : table.rows) {
    const Date d = parse_date(row[dc]);
    if (d != expected) throw Error(path.string() + ": expected " + format_date(expected) + ", found " + row[dc]);
    if (!(parse_year_month(row[dc]) == chunk.month)) {
      throw Error(path.string() + ": date " + row[dc] + " outside month " + chunk.month.str());
    }
    chunk.values.push_back(csv::parse_double(row[vc], path.string() + " value at " + row[dc]));
    expected = next_day(expected);
  }
  return chunk;
}

std::pair<std::vector<DailyChunk>, MonthlyIndex> read_gtrends_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("'" + dir.string() + "' is not a directory");
  MonthlyIndex monthly = read_monthly_index(dir / "monthly.csv");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv" && entry.path().filename() != "monthly.csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DailyChunk> chunks;
  for (const auto& f : files) chunks.push_back(read_daily_chunk(f));
  return {std::move(chunks), std::move(monthly)};
}

}  // namespace sparsevar
