#pragma once

#include <vector>

#include "sparsevar/lasso.hpp"
#include "sparsevar/panel.hpp"
#include "sparsevar/var_model.hpp"

namespace sparsevar {

// Anchored walk-forward scheme: every fold trains on [0, end) and validates
// on the following test_size observations; the training end advances by
// test_size per fold.
struct WalkForwardPlan {
  int n_splits = 3;
  Index test_size = 0;
  Index min_train = 0;
};

struct Split {
  Index train_begin = 0;
  Index train_end = 0;  // exclusive
  Index valid_begin = 0;
  Index valid_end = 0;  // exclusive
};

/// Throws Error when min_train + n_splits * test_size > sample_length or any
/// field is non-positive.
std::vector<Split> make_splits(Index sample_length, const WalkForwardPlan& plan);

struct CvResult {
  double lambda_star = 0.0;
  std::vector<double> lambdas;           // grid in evaluation order (decreasing)
  Matrix losses;                         // lambdas.size() x n_splits
  Vector mean_loss;                      // per lambda, NaN when excluded
  std::vector<bool> excluded;            // lambda dropped: no fold converged
  std::vector<Split> splits;
  std::vector<StandardizationStats> fold_stats;  // computed from each training window
};

/// Selects lambda by mean 1-step-ahead squared forecast error (summed over
/// series, averaged over validation points) across anchored walk-forward
/// folds. Each fold standardizes with its own training-window statistics and
/// the errors are measured in those standardized units. Exact ties go to the
/// larger lambda. When cfg.lambdas is empty the grid spans cfg.grid below the
/// largest per-fold lambda_max.
CvResult select_lambda(const TimePanel& panel, int p, const LassoConfig& cfg, const WalkForwardPlan& plan,
                       Estimator estimator);

}  // namespace sparsevar
