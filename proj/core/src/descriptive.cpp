#include "sparsevar/descriptive.hpp"

#include <algorithm>
#include <cmath>

#include "sparsevar/error.hpp"
#include "sparsevar/linalg.hpp"

namespace sparsevar {
namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double adf_statistic(const Vector& y, int lags, AdfTerms terms) {
  if (lags < 0) throw Error("adf: negative augmentation lag count");
  const Index t_len = y.size();
  if (t_len < 20) throw Error("adf: needs at least 20 observations, got " + std::to_string(t_len));
  // Regression rows run over t = lags+1 .. T-1 (0-based, dy_t = y_t - y_{t-1}).
  const Index n = t_len - 1 - lags;
  const Index lead = terms == AdfTerms::Constant ? 1 : 0;
  const Index regressors = lead + 1 + lags;
  if (n <= regressors + 1) {
    throw Error("adf: series of length " + std::to_string(t_len) + " too short for " + std::to_string(lags) +
                " augmentation lags");
  }
  Matrix X(n, regressors);
  Vector dy(n);
  for (Index r = 0; r < n; ++r) {
    const Index t = r + lags + 1;
    dy[r] = y[t] - y[t - 1];
    if (lead == 1) X(r, 0) = 1.0;
    X(r, lead) = y[t - 1];
    for (int i = 1; i <= lags; ++i) X(r, lead + i) = y[t - i] - y[t - i - 1];
  }
  const OlsFit fit = least_squares(X, dy);
  return fit.beta[lead] / fit.std_errors[lead];
}

SummaryReport summary_stats(const TimePanel& panel, int adf_lags, KurtosisConvention kurtosis, AdfTerms adf_terms) {
  SummaryReport report;
  report.adf_lags = adf_lags;
  report.kurtosis_convention = kurtosis;
  report.adf_terms = adf_terms;
  const auto n = static_cast<double>(panel.rows());
  if (panel.rows() < 1) throw Error("summary_stats: empty panel");
  for (Index j = 0; j < panel.cols(); ++j) {
    const Vector col = panel.values.col(j);
    SeriesSummary s;
    s.name = panel.names[static_cast<std::size_t>(j)];
    s.mean = col.mean();
    s.min = col.minCoeff();
    s.max = col.maxCoeff();
    s.range = s.max - s.min;
    s.median = median_of(std::vector<double>(col.data(), col.data() + col.size()));
    const Eigen::ArrayXd centered = col.array() - s.mean;
    const double m2 = centered.square().sum() / n;
    const double m3 = centered.cube().sum() / n;
    const double m4 = centered.square().square().sum() / n;
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    if (kurtosis == KurtosisConvention::Excess) s.kurtosis -= 3.0;
    s.adf = adf_statistic(col, adf_lags, adf_terms);
    report.series.push_back(std::move(s));
  }
  return report;
}

}  // namespace sparsevar
