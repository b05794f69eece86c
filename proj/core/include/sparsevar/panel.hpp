#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sparsevar/dates.hpp"

namespace sparsevar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// T x K matrix of named daily series. Row t is the observation at dates[t].
struct TimePanel {
  std::vector<Date> dates;
  std::vector<std::string> names;
  Matrix values;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Throws Error if dates are not strictly increasing, shapes disagree,
  /// names repeat, or any value is NaN.
  void validate() const;

  /// Same as validate() plus a check that consecutive dates are exactly one
  /// day apart. Used on ingestion, where a gap means an upstream error.
  void validate_daily() const;

  Index column(const std::string& name) const;

  /// Rows [begin, end) as a new panel.
  TimePanel slice(Index begin, Index end) const;

  /// Selected columns in the given order.
  TimePanel select(const std::vector<std::string>& columns) const;
};

/// Joins panels column-wise. All inputs must share identical date vectors.
TimePanel hstack(const std::vector<TimePanel>& panels);

struct StandardizationStats {
  Vector means;
  Vector sds;  // population (1/T) standard deviation

  static StandardizationStats identity(Index k) {
    return {Vector::Zero(k), Vector::Ones(k)};
  }
};

// Y = A Z + U in compact VAR form.
// Column tau of Z stacks [y_{tau+p-1}; ...; y_tau] (lag 1 first) and
// column tau of Y is y_{tau+p}.
struct LagEmbedding {
  Matrix Y;  // K x (T - p)
  Matrix Z;  // (K p) x (T - p)
  int p = 0;

  Index k() const { return Y.rows(); }
  Index n() const { return Y.cols(); }
};

TimePanel log_returns(const TimePanel& prices);

std::pair<TimePanel, StandardizationStats> standardize(const TimePanel& panel);

/// Applies previously computed statistics (e.g. from a training window).
TimePanel apply_standardization(const TimePanel& panel, const StandardizationStats& stats);

TimePanel destandardize(const TimePanel& panel, const StandardizationStats& stats);

LagEmbedding lag_embed(const TimePanel& panel, int p);
LagEmbedding lag_embed(const Matrix& values, int p);

/// Regressor vector for predicting the row after `last_row`:
/// [y_{last}; y_{last-1}; ...; y_{last-p+1}].
Vector stacked_lags(const Matrix& values, Index last_row, int p);

}  // namespace sparsevar
