#pragma once

#include <string>
#include <vector>

#include "sparsevar/panel.hpp"

namespace sparsevar {

enum class KurtosisConvention { Excess, Raw };

enum class AdfTerms { None, Constant };

struct SeriesSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double range = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double adf = 0.0;
};

struct SummaryReport {
  KurtosisConvention kurtosis_convention = KurtosisConvention::Excess;
  int adf_lags = 1;
  AdfTerms adf_terms = AdfTerms::Constant;
  std::vector<SeriesSummary> series;
};

/// Augmented Dickey-Fuller t-statistic on the lagged level in
///   dy_t = c + gamma y_{t-1} + sum_{i=1..lags} delta_i dy_{t-i} + e_t
/// (c dropped for AdfTerms::None). Needs at least 20 observations and enough
/// rows for the regression.
double adf_statistic(const Vector& series, int lags, AdfTerms terms = AdfTerms::Constant);

SummaryReport summary_stats(const TimePanel& panel, int adf_lags = 1,
                            KurtosisConvention kurtosis = KurtosisConvention::Excess,
                            AdfTerms adf_terms = AdfTerms::Constant);

}  // namespace sparsevar
