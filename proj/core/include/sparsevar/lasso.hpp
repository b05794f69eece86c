#pragma once

#include <vector>

#include "sparsevar/panel.hpp"

namespace sparsevar {

struct LambdaGrid {
  int n_points = 100;
  double ratio = 1e-4;  // lambda_min / lambda_max
};

struct LassoConfig {
  double lambda = 0.0;
  double tol = 1e-8;       // max absolute coefficient change per sweep
  int max_sweeps = 100000;
  LambdaGrid grid;
  // When non-empty, used instead of the log-spaced grid.
  std::vector<double> lambdas;
  bool record_objective = false;

  /// Throws Error listing every violated constraint.
  void validate() const;
};

/// Soft-thresholding operator sign(z) max(|z| - gamma, 0).
inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

/// Log-spaced, strictly decreasing grid from lambda_max down to ratio * lambda_max.
std::vector<double> lambda_grid(double lambda_max, const LambdaGrid& grid);

// Sufficient statistics of a single-response least-squares problem with the
// regressors stored as rows: gram = X X^T (m x m), xty = X y, yty = y^T y,
// n = number of observations.
struct GramSystem {
  Matrix gram;
  Vector xty;
  double yty = 0.0;
  Index n = 0;

  static GramSystem from_rows(const Matrix& x_rows, const Vector& y);
  Index dim() const { return xty.size(); }
};

struct LassoSolution {
  Vector beta;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // objective after each sweep (when recorded)
};

// Cyclic coordinate descent for
//   (1/n) ||y - X^T beta||^2 + lambda ||beta||_1
// working entirely on the Gram form, so the cost per sweep is O(m^2)
// independent of n. Coordinates are visited in index order.
class LassoSolver {
 public:
  explicit LassoSolver(GramSystem system);

  LassoSolution solve(double lambda, const LassoConfig& cfg, const Vector* warm_start = nullptr) const;

  /// Smallest lambda with the all-zero solution optimal: max_j (2/n)|x_j . y|.
  double lambda_max() const;

  double objective(const Vector& beta, double lambda) const;
  double rss(const Vector& beta) const;

  /// Gradient of the smooth part: -(2/n)(X y - X X^T beta).
  Vector gradient(const Vector& beta) const;

  /// Worst violation of the subgradient optimality conditions at beta.
  double kkt_violation(const Vector& beta, double lambda) const;

  const GramSystem& system() const { return system_; }

 private:
  GramSystem system_;
};

// One (lambda, solution) pair on a warm-started path.
struct PathPoint {
  double lambda = 0.0;
  LassoSolution solution;
};

/// Solves along `lambdas` in the given order, warm-starting each point from
/// the previous solution.
std::vector<PathPoint> solve_path(const LassoSolver& solver, const std::vector<double>& lambdas,
                                  const LassoConfig& cfg);

}  // namespace sparsevar
