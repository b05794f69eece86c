#include "sparsevar/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "sparsevar/error.hpp"
#include "sparsevar/logging.hpp"
#include "sparsevar/parallel.hpp"

namespace sparsevar {

std::vector<Split> make_splits(Index sample_length, const WalkForwardPlan& plan) {
  std::vector<std::string> problems;
  if (plan.n_splits < 1) problems.push_back("n_splits must be >= 1");
  if (plan.test_size < 1) problems.push_back("test_size must be >= 1");
  if (plan.min_train < 1) problems.push_back("min_train must be >= 1");
  if (problems.empty() && plan.min_train + plan.n_splits * plan.test_size > sample_length) {
    problems.push_back("min_train + n_splits * test_size = " +
                       std::to_string(plan.min_train + plan.n_splits * plan.test_size) + " exceeds sample length " +
                       std::to_string(sample_length));
  }
  if (!problems.empty()) {
    std::string msg = "infeasible walk-forward plan: ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw Error(msg);
  }
  std::vector<Split> splits;
  for (int i = 0; i < plan.n_splits; ++i) {
    Split s;
    s.train_begin = 0;
    s.train_end = plan.min_train + i * plan.test_size;
    s.valid_begin = s.train_end;
    s.valid_end = s.valid_begin + plan.test_size;
    splits.push_back(s);
  }
  return splits;
}

CvResult select_lambda(const TimePanel& panel, int p, const LassoConfig& cfg, const WalkForwardPlan& plan,
                       Estimator estimator) {
  cfg.validate();
  CvResult result;
  result.splits = make_splits(panel.rows(), plan);
  const std::size_t n_folds = result.splits.size();
  for (const auto& s : result.splits) {
    if (s.train_end - s.train_begin <= p + 1) {
      throw Error("fold training window of " + std::to_string(s.train_end) + " rows too short for lag order " +
                  std::to_string(p));
    }
  }

  std::vector<LagEmbedding> embeds(n_folds);
  std::vector<Matrix> standardized_prefix(n_folds);
  result.fold_stats.resize(n_folds);
  for (std::size_t f = 0; f < n_folds; ++f) {
    const Split& s = result.splits[f];
    auto [train, stats] = standardize(panel.slice(s.train_begin, s.train_end));
    embeds[f] = lag_embed(train, p);
    standardized_prefix[f] = apply_standardization(panel.slice(0, s.valid_end), stats).values;
    result.fold_stats[f] = std::move(stats);
  }

  if (!cfg.lambdas.empty()) {
    result.lambdas = cfg.lambdas;
    std::sort(result.lambdas.begin(), result.lambdas.end(), std::greater<>());
    result.lambdas.erase(std::unique(result.lambdas.begin(), result.lambdas.end()), result.lambdas.end());
  } else {
    double lmax = 0.0;
    for (const auto& e : embeds) lmax = std::max(lmax, lambda_max(e));
    result.lambdas = lambda_grid(lmax, cfg.grid);
  }
  const std::size_t n_lambda = result.lambdas.size();
  result.losses = Matrix::Constant(static_cast<Index>(n_lambda), static_cast<Index>(n_folds),
                                   std::numeric_limits<double>::quiet_NaN());
  std::vector<std::vector<char>> converged(n_folds, std::vector<char>(n_lambda, 1));

  parallel_for(n_folds, [&](std::size_t f) {
    const Split& s = result.splits[f];
    const std::vector<VarModel> path = fit_var_path(embeds[f], estimator, result.lambdas, cfg);
    const Matrix& data = standardized_prefix[f];
    for (std::size_t i = 0; i < n_lambda; ++i) {
      converged[f][i] = path[i].solver.converged ? 1 : 0;
      double total = 0.0;
      for (Index t = s.valid_begin; t < s.valid_end; ++t) {
        const Vector z = stacked_lags(data, t - 1, p);
        const Vector err = data.row(t).transpose() - path[i].A * z;
        total += err.squaredNorm();
      }
      result.losses(static_cast<Index>(i), static_cast<Index>(f)) = total / static_cast<double>(s.valid_end - s.valid_begin);
    }
  });

  result.excluded.assign(n_lambda, false);
  result.mean_loss = Vector::Constant(static_cast<Index>(n_lambda), std::numeric_limits<double>::quiet_NaN());
  bool any = false;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_lambda; ++i) {
    std::size_t n_ok = 0;
    for (std::size_t f = 0; f < n_folds; ++f) n_ok += converged[f][i] != 0 ? 1 : 0;
    if (n_ok == 0) {
      result.excluded[i] = true;
      log::warn("cross-validation: lambda " + std::to_string(result.lambdas[i]) +
                " excluded, coordinate descent did not converge in any fold");
      continue;
    }
    if (n_ok < n_folds) {
      log::warn("cross-validation: lambda " + std::to_string(result.lambdas[i]) + " did not converge in " +
                std::to_string(n_folds - n_ok) + " of " + std::to_string(n_folds) + " folds");
    }
    const double mean = result.losses.row(static_cast<Index>(i)).mean();
    result.mean_loss[static_cast<Index>(i)] = mean;
    // Grid is decreasing, so strict improvement keeps the larger lambda on ties.
    if (!any || mean < best) {
      best = mean;
      result.lambda_star = result.lambdas[i];
      any = true;
    }
  }
  if (!any) throw Error("cross-validation: no lambda in the grid produced converged fits");
  return result;
}

}  // namespace sparsevar
