#include "sparsevar/panel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sparsevar/error.hpp"

namespace sparsevar {

void TimePanel::validate() const {
  if (static_cast<Index>(dates.size()) != values.rows()) {
    throw Error("panel has " + std::to_string(dates.size()) + " dates but " + std::to_string(values.rows()) +
                " rows");
  }
  if (static_cast<Index>(names.size()) != values.cols()) {
    throw Error("panel has " + std::to_string(names.size()) + " names but " + std::to_string(values.cols()) +
                " columns");
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error("duplicate series name '" + n + "'");
  }
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (dates[t] <= dates[t - 1]) {
      throw Error("dates not strictly increasing at " + format_date(dates[t]));
    }
  }
  for (Index j = 0; j < values.cols(); ++j) {
    for (Index t = 0; t < values.rows(); ++t) {
      if (std::isnan(values(t, j))) {
        throw Error("NaN in series '" + names[j] + "' at " + format_date(dates[t]));
      }
    }
  }
}

void TimePanel::validate_daily() const {
  validate();
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (dates[t] != next_day(dates[t - 1])) {
      throw Error("missing dates between " + format_date(dates[t - 1]) + " and " + format_date(dates[t]));
    }
  }
}

Index TimePanel::column(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return static_cast<Index>(j);
  }
  throw Error("unknown series '" + name + "'");
}

TimePanel TimePanel::slice(Index begin, Index end) const {
  if (begin < 0 || end > rows() || begin > end) {
    throw Error("row slice [" + std::to_string(begin) + ", " + std::to_string(end) + ") out of range");
  }
  TimePanel out;
  out.dates.assign(dates.begin() + begin, dates.begin() + end);
  out.names = names;
  out.values = values.middleRows(begin, end - begin);
  return out;
}

TimePanel TimePanel::select(const std::vector<std::string>& columns) const {
  TimePanel out;
  out.dates = dates;
  out.names = columns;
  out.values.resize(rows(), static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.values.col(static_cast<Index>(j)) = values.col(column(columns[j]));
  }
  return out;
}

TimePanel hstack(const std::vector<TimePanel>& panels) {
  if (panels.empty()) throw Error("hstack of zero panels");
  TimePanel out;
  out.dates = panels.front().dates;
  Index total = 0;
  for (const auto& p : panels) {
    if (p.dates != out.dates) throw Error("hstack: panels cover different dates");
    total += p.cols();
  }
  out.values.resize(static_cast<Index>(out.dates.size()), total);
  Index at = 0;
  for (const auto& p : panels) {
    out.values.middleCols(at, p.cols()) = p.values;
    out.names.insert(out.names.end(), p.names.begin(), p.names.end());
    at += p.cols();
  }
  out.validate();
  return out;
}

TimePanel log_returns(const TimePanel& prices) {
  if (prices.rows() < 2) throw Error("log_returns needs at least 2 observations");
  for (Index j = 0; j < prices.cols(); ++j) {
    for (Index t = 0; t < prices.rows(); ++t) {
      if (!(prices.values(t, j) > 0.0)) {
        throw Error("non-positive price in series '" + prices.names[j] + "' at " + format_date(prices.dates[t]));
      }
    }
  }
  TimePanel out;
  out.names = prices.names;
  out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  const Index n = prices.rows() - 1;
  out.values.resize(n, prices.cols());
  for (Index j = 0; j < prices.cols(); ++j) {
    for (Index t = 0; t < n; ++t) {
      out.values(t, j) = std::log(prices.values(t + 1, j)) - std::log(prices.values(t, j));
    }
  }
  return out;
}

std::pair<TimePanel, StandardizationStats> standardize(const TimePanel& panel) {
  const Index n = panel.rows();
  if (n < 2) throw Error("standardize needs at least 2 observations");
  StandardizationStats stats{Vector(panel.cols()), Vector(panel.cols())};
  TimePanel out = panel;
  for (Index j = 0; j < panel.cols(); ++j) {
    const double mean = panel.values.col(j).mean();
    // Second centering pass removes the rounding left by the first when the
    // mean is large relative to the spread.
    Vector centered = panel.values.col(j).array() - mean;
    const double shift = centered.mean();
    centered.array() -= shift;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
      throw Error("series '" + panel.names[j] + "' has zero variance");
    }
    stats.means[j] = mean + shift;
    stats.sds[j] = sd;
    out.values.col(j) = centered / sd;
  }
  return {out, stats};
}

TimePanel apply_standardization(const TimePanel& panel, const StandardizationStats& stats) {
  if (stats.means.size() != panel.cols() || stats.sds.size() != panel.cols()) {
    throw Error("standardization stats cover " + std::to_string(stats.means.size()) + " series, panel has " +
                std::to_string(panel.cols()));
  }
  TimePanel out = panel;
  for (Index j = 0; j < panel.cols(); ++j) {
    out.values.col(j) = (panel.values.col(j).array() - stats.means[j]) / stats.sds[j];
  }
  return out;
}

TimePanel destandardize(const TimePanel& panel, const StandardizationStats& stats) {
  if (stats.means.size() != panel.cols() || stats.sds.size() != panel.cols()) {
    throw Error("standardization stats cover " + std::to_string(stats.means.size()) + " series, panel has " +
                std::to_string(panel.cols()));
  }
  TimePanel out = panel;
  for (Index j = 0; j < panel.cols(); ++j) {
    out.values.col(j) = panel.values.col(j).array() * stats.sds[j] + stats.means[j];
  }
  return out;
}

LagEmbedding lag_embed(const Matrix& values, int p) {
  const Index t_len = values.rows();
  const Index k = values.cols();
  if (p < 1) throw Error("lag order must be >= 1");
  if (p >= t_len) {
    throw Error("lag order " + std::to_string(p) + " needs more than " + std::to_string(t_len) + " observations");
  }
  const Index n = t_len - p;
  LagEmbedding e;
  e.p = p;
  e.Y = values.bottomRows(n).transpose();
  e.Z.resize(k * p, n);
  for (Index tau = 0; tau < n; ++tau) {
    for (int lag = 1; lag <= p; ++lag) {
      e.Z.block((lag - 1) * k, tau, k, 1) = values.row(tau + p - lag).transpose();
    }
  }
  return e;
}

LagEmbedding lag_embed(const TimePanel& panel, int p) { return lag_embed(panel.values, p); }

Vector stacked_lags(const Matrix& values, Index last_row, int p) {
  const Index k = values.cols();
  if (last_row - p + 1 < 0 || last_row >= values.rows()) throw Error("not enough history for stacked lags");
  Vector z(k * p);
  for (int lag = 1; lag <= p; ++lag) {
    z.segment((lag - 1) * k, k) = values.row(last_row - lag + 1).transpose();
  }
  return z;
}

}  // namespace sparsevar
