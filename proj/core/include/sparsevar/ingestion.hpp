#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparsevar/panel.hpp"

namespace sparsevar {

struct YearMonth {
  int year = 0;
  unsigned month = 0;  // 1..12

  friend bool operator==(const YearMonth&, const YearMonth&) = default;
  YearMonth next() const { return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1}; }
  std::string str() const;
};

YearMonth parse_year_month(const std::string& text);  // YYYY-MM or YYYY-MM-DD

// Monthly Google-Trends weights on the 0-100 scale, one per contiguous month.
struct MonthlyIndex {
  std::vector<YearMonth> months;
  std::vector<double> weights;

  void validate() const;
};

// Daily 0-100 values for one calendar month, as returned by a one-month query.
struct DailyChunk {
  YearMonth month;
  std::vector<double> values;
};

/// Day d of month m becomes chunk[m][d] * weight[m] / 100. Chunks are matched
/// to months by YearMonth; a missing chunk or a chunk whose length differs
/// from the calendar month length is an error.
TimePanel rescale_gtrends(const std::vector<DailyChunk>& daily_chunks, const MonthlyIndex& monthly,
                          const std::string& series_name = "gtrends");

struct SentimentConfig {
  double alpha = 15.0;

  void validate() const;
};

struct ScoredItem {
  Date day;  // UTC calendar day of the timestamp
  double valence_sum = 0.0;
};

/// x / sqrt(x^2 + alpha).
double compound_normalize(double x, const SentimentConfig& cfg = {});

enum class FillPolicy { Zero, CarryForward };

struct DateRange {
  Date first;
  Date last;  // inclusive
};

/// Mean compound score per UTC day over the inclusive window. Items outside
/// the window are ignored. Days without items get 0 (Zero) or the previous
/// day's value (CarryForward; 0 before the first observed day).
TimePanel daily_aggregate(const std::vector<ScoredItem>& items, const SentimentConfig& cfg, DateRange window,
                          FillPolicy fill = FillPolicy::Zero, const std::string& series_name = "sentiment");

// File loaders for the ingestion CSV formats.
std::vector<ScoredItem> read_scored_items(const std::filesystem::path& path);
MonthlyIndex read_monthly_index(const std::filesystem::path& path);
DailyChunk read_daily_chunk(const std::filesystem::path& path);

/// Loads `monthly.csv` plus every other *.csv (one per month) from a directory.
std::pair<std::vector<DailyChunk>, MonthlyIndex> read_gtrends_dir(const std::filesystem::path& dir);

}  // namespace sparsevar
