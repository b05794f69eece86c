#include "sparsevar/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsevar/error.hpp"

namespace sparsevar {

void LassoConfig::validate() const {
  std::vector<std::string> problems;
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) problems.push_back("lambda must be finite and >= 0");
  if (!(tol > 0.0)) problems.push_back("tol must be > 0");
  if (max_sweeps < 1) problems.push_back("max_sweeps must be >= 1");
  if (grid.n_points < 1) problems.push_back("grid n_points must be >= 1");
  if (!(grid.ratio > 0.0 && grid.ratio < 1.0)) problems.push_back("grid ratio must lie in (0, 1)");
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      problems.push_back("explicit lambdas must be finite and >= 0");
      break;
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid lasso config: ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw Error(msg);
  }
}

std::vector<double> lambda_grid(double lambda_max, const LambdaGrid& grid) {
  if (!(lambda_max >= 0.0) || !std::isfinite(lambda_max)) throw Error("lambda_max must be finite and >= 0");
  if (grid.n_points < 1) throw Error("grid needs at least one point");
  if (!(grid.ratio > 0.0 && grid.ratio < 1.0)) throw Error("grid ratio must lie in (0, 1)");
  std::vector<double> out(static_cast<std::size_t>(grid.n_points));
  if (grid.n_points == 1) {
    out[0] = lambda_max;
    return out;
  }
  const double log_max = std::log(lambda_max);
  const double step = std::log(grid.ratio) / static_cast<double>(grid.n_points - 1);
  for (int i = 0; i < grid.n_points; ++i) out[static_cast<std::size_t>(i)] = std::exp(log_max + step * i);
  out.front() = lambda_max;
  return out;
}

GramSystem GramSystem::from_rows(const Matrix& x_rows, const Vector& y) {
  if (x_rows.cols() != y.size()) throw Error("GramSystem: regressors and response differ in length");
  GramSystem s;
  s.gram = x_rows * x_rows.transpose();
  s.xty = x_rows * y;
  s.yty = y.squaredNorm();
  s.n = y.size();
  return s;
}

LassoSolver::LassoSolver(GramSystem system) : system_(std::move(system)) {
  if (system_.n < 1) throw Error("lasso: no observations");
  if (system_.gram.rows() != system_.dim() || system_.gram.cols() != system_.dim()) {
    throw Error("lasso: gram matrix dimension mismatch");
  }
}

double LassoSolver::lambda_max() const {
  if (system_.dim() == 0) return 0.0;
  return 2.0 / static_cast<double>(system_.n) * system_.xty.cwiseAbs().maxCoeff();
}

double LassoSolver::rss(const Vector& beta) const {
  const double v = system_.yty - 2.0 * beta.dot(system_.xty) + beta.dot(system_.gram * beta);
  return std::max(v, 0.0);
}

double LassoSolver::objective(const Vector& beta, double lambda) const {
  // Extended precision: near convergence a sweep lowers the objective by less
  // than double rounding of the quadratic form.
  const Index m = beta.size();
  long double quad = 0.0L, cross = 0.0L, l1 = 0.0L;
  for (Index j = 0; j < m; ++j) {
    const long double bj = beta[j];
    long double row = 0.0L;
    for (Index i = 0; i < m; ++i) row += static_cast<long double>(system_.gram(i, j)) * beta[i];
    quad += bj * row;
    cross += bj * system_.xty[j];
    l1 += std::abs(bj);
  }
  long double r = static_cast<long double>(system_.yty) - 2.0L * cross + quad;
  if (r < 0.0L) r = 0.0L;
  return static_cast<double>(r / static_cast<long double>(system_.n) + static_cast<long double>(lambda) * l1);
}

Vector LassoSolver::gradient(const Vector& beta) const {
  return -2.0 / static_cast<double>(system_.n) * (system_.xty - system_.gram * beta);
}

double LassoSolver::kkt_violation(const Vector& beta, double lambda) const {
  const Vector g = gradient(beta);
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    double v = 0.0;
    if (beta[j] != 0.0) {
      v = std::abs(g[j] + lambda * (beta[j] > 0.0 ? 1.0 : -1.0));
    } else {
      v = std::max(0.0, std::abs(g[j]) - lambda);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

LassoSolution LassoSolver::solve(double lambda, const LassoConfig& cfg, const Vector* warm_start) const {
  if (!(lambda >= 0.0)) throw Error("lasso: lambda must be >= 0");
  const Index m = system_.dim();
  const Matrix& gram = system_.gram;
  LassoSolution sol;
  sol.beta = Vector::Zero(m);
  if (warm_start != nullptr) {
    if (warm_start->size() != m) throw Error("lasso: warm start has wrong dimension");
    sol.beta = *warm_start;
  }
  // q = X y - X X^T beta, i.e. X times the current residual.
  Vector q = system_.xty - gram * sol.beta;
  const double threshold = 0.5 * lambda * static_cast<double>(system_.n);

  if (cfg.record_objective) sol.objective_trace.push_back(objective(sol.beta, lambda));
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < m; ++j) {
      const double gjj = gram(j, j);
      if (gjj <= 0.0) {
        // Regressor identically zero; its coefficient stays at zero.
        continue;
      }
      const double old = sol.beta[j];
      const double z = q[j] + gjj * old;
      const double updated = soft_threshold(z, threshold) / gjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        q.noalias() -= delta * gram.col(j);
        sol.beta[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    sol.sweeps = sweep;
    if (cfg.record_objective) sol.objective_trace.push_back(objective(sol.beta, lambda));
    if (max_change < cfg.tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

std::vector<PathPoint> solve_path(const LassoSolver& solver, const std::vector<double>& lambdas,
                                  const LassoConfig& cfg) {
  std::vector<PathPoint> path;
  path.reserve(lambdas.size());
  const Vector* warm = nullptr;
  for (double lambda : lambdas) {
    PathPoint point{lambda, solver.solve(lambda, cfg, warm)};
    path.push_back(std::move(point));
    warm = &path.back().solution.beta;
  }
  return path;
}

}  // namespace sparsevar
