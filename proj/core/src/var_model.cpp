#include "sparsevar/var_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsevar/error.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/parallel.hpp"

namespace sparsevar {

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::Ols: return "ols";
    case Estimator::Lasso: return "lasso";
    case Estimator::FglsLasso: return "fgls-lasso";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view text) {
  if (text == "ols") return Estimator::Ols;
  if (text == "lasso") return Estimator::Lasso;
  if (text == "fgls-lasso" || text == "fgls") return Estimator::FglsLasso;
  throw Error("unknown estimator '" + std::string(text) + "' (expected ols, lasso or fgls-lasso)");
}

void VarModel::validate() const {
  if (p < 1) throw Error("model lag order must be >= 1");
  const Index kk = A.rows();
  if (A.cols() != kk * p) throw Error("model A must be K x Kp");
  if (!names.empty() && static_cast<Index>(names.size()) != kk) throw Error("model names do not match K");
  if (sigma_u.rows() != kk || sigma_u.cols() != kk) throw Error("model sigma_u must be K x K");
  if ((sigma_u - sigma_u.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw Error("model sigma_u not symmetric");
  if (kk > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_u, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw Error("model sigma_u not positive semidefinite");
  }
  if (rho) {
    if (rho->size() != kk) throw Error("model rho must have K entries");
    if ((rho->array().abs() >= 1.0).any()) throw Error("model rho entries must satisfy |rho| < 1");
  }
  if (stats.means.size() != kk || stats.sds.size() != kk) throw Error("model standardization stats must have K entries");
}

EmbeddingMoments::EmbeddingMoments(const LagEmbedding& e) : n_(e.n()) {
  if (n_ < 1) throw Error("embedding has no observations");
  const Matrix& Z = e.Z;
  const Matrix& Y = e.Y;
  gram_ = Z * Z.transpose();
  zy_ = Z * Y.transpose();
  z_first_ = Z.col(0);
  z_last_ = Z.col(n_ - 1);
  y_first_ = Y.col(0);
  y_last_ = Y.col(n_ - 1);
  yy_ = Y.rowwise().squaredNorm();
  if (n_ > 1) {
    const auto z_now = Z.rightCols(n_ - 1);
    const auto z_prev = Z.leftCols(n_ - 1);
    const auto y_now = Y.rightCols(n_ - 1);
    const auto y_prev = Y.leftCols(n_ - 1);
    const Matrix s = z_now * z_prev.transpose();
    cross_lag_ = s + s.transpose();
    zy_mixed_ = z_now * y_prev.transpose() + z_prev * y_now.transpose();
    yy_lag_ = (y_now.array() * y_prev.array()).rowwise().sum();
  } else {
    cross_lag_ = Matrix::Zero(Z.rows(), Z.rows());
    zy_mixed_ = Matrix::Zero(Z.rows(), Y.rows());
    yy_lag_ = Vector::Zero(Y.rows());
  }
}

GramSystem EmbeddingMoments::system(Index k, double rho) const {
  GramSystem s;
  s.n = n_;
  if (rho == 0.0) {
    s.gram = gram_;
    s.xty = zy_.col(k);
    s.yty = yy_[k];
    return s;
  }
  const double r2 = rho * rho;
  s.gram = (1.0 + r2) * gram_ - rho * cross_lag_ - r2 * (z_last_ * z_last_.transpose() + z_first_ * z_first_.transpose());
  s.xty = (1.0 + r2) * zy_.col(k) - rho * zy_mixed_.col(k) - r2 * (z_last_ * y_last_[k] + z_first_ * y_first_[k]);
  s.yty = (1.0 + r2) * yy_[k] - 2.0 * rho * yy_lag_[k] - r2 * (y_last_[k] * y_last_[k] + y_first_[k] * y_first_[k]);
  return s;
}

Vector prais_winsten(const Vector& x, double rho) {
  Vector out(x.size());
  if (x.size() == 0) return out;
  out[0] = std::sqrt(1.0 - rho * rho) * x[0];
  for (Index t = 1; t < x.size(); ++t) out[t] = x[t] - rho * x[t - 1];
  return out;
}

double lag1_autocorrelation(const Vector& u) {
  const double denom = u.squaredNorm();
  if (!(denom > 0.0) || u.size() < 2) return 0.0;
  const double num = u.tail(u.size() - 1).dot(u.head(u.size() - 1));
  return std::clamp(num / denom, -0.99, 0.99);
}

double lambda_max(const LagEmbedding& embed) {
  if (embed.n() < 1) throw Error("embedding has no observations");
  return 2.0 / static_cast<double>(embed.n()) * (embed.Y * embed.Z.transpose()).cwiseAbs().maxCoeff();
}

namespace {

void check_embedding(const LagEmbedding& embed) {
  if (embed.p < 1) throw Error("embedding lag order must be >= 1");
  if (embed.Z.rows() != embed.k() * embed.p) throw Error("embedding Z must have K p rows");
  if (embed.Z.cols() != embed.n()) throw Error("embedding Y and Z differ in column count");
  if (embed.n() < 1) throw Error("embedding has no observations");
  if (embed.Z.cwiseAbs().maxCoeff() == 0.0) throw Error("embedding regressors are all zero");
}

Matrix whiten_rows(const Matrix& U, const Vector* rho) {
  if (rho == nullptr) return U;
  Matrix out(U.rows(), U.cols());
  for (Index k = 0; k < U.rows(); ++k) out.row(k) = prais_winsten(U.row(k).transpose(), (*rho)[k]).transpose();
  return out;
}

// Residual covariance and solver metadata shared by all estimators.
VarModel assemble(const LagEmbedding& embed, Matrix A, std::optional<Vector> rho, const std::vector<LassoSolution>& sols,
                  Estimator estimator, double lambda) {
  VarModel m;
  m.p = embed.p;
  m.A = std::move(A);
  m.rho = std::move(rho);
  m.stats = StandardizationStats::identity(embed.k());
  m.names.clear();
  const Matrix u = whiten_rows(embed.Y - m.A * embed.Z, m.rho ? &*m.rho : nullptr);
  m.sigma_u = u * u.transpose() / static_cast<double>(embed.n());
  m.sigma_u = 0.5 * (m.sigma_u + m.sigma_u.transpose());
  m.solver.estimator = to_string(estimator);
  m.solver.lambda = lambda;
  m.solver.sweeps = 0;
  m.solver.converged = true;
  for (const auto& s : sols) {
    m.solver.sweeps = std::max(m.solver.sweeps, s.sweeps);
    m.solver.converged = m.solver.converged && s.converged;
    if (!s.objective_trace.empty()) m.solver.objective_traces.push_back(s.objective_trace);
  }
  return m;
}

}  // namespace

VarModel fit_lasso_var(const LagEmbedding& embed, const LassoConfig& cfg) {
  cfg.validate();
  check_embedding(embed);
  const EmbeddingMoments moments(embed);
  const Index k = embed.k();
  std::vector<LassoSolution> sols(static_cast<std::size_t>(k));
  parallel_for(sols.size(), [&](std::size_t eq) {
    const LassoSolver solver(moments.system(static_cast<Index>(eq), 0.0));
    sols[eq] = solver.solve(cfg.lambda, cfg);
  });
  Matrix A(k, embed.Z.rows());
  for (Index eq = 0; eq < k; ++eq) A.row(eq) = sols[static_cast<std::size_t>(eq)].beta.transpose();
  return assemble(embed, std::move(A), std::nullopt, sols, Estimator::Lasso, cfg.lambda);
}

VarModel fit_fgls_lasso_var(const LagEmbedding& embed, const LassoConfig& cfg) {
  cfg.validate();
  check_embedding(embed);
  const EmbeddingMoments moments(embed);
  const Index k = embed.k();
  std::vector<LassoSolution> sols(static_cast<std::size_t>(k));
  Vector rho(k);
  parallel_for(sols.size(), [&](std::size_t eq_index) {
    const auto eq = static_cast<Index>(eq_index);
    const LassoSolver stage1(moments.system(eq, 0.0));
    const LassoSolution first = stage1.solve(cfg.lambda, cfg);
    const Vector u = embed.Y.row(eq).transpose() - embed.Z.transpose() * first.beta;
    rho[eq] = lag1_autocorrelation(u);
    const LassoSolver stage2(moments.system(eq, rho[eq]));
    LassoSolution second = stage2.solve(cfg.lambda, cfg, &first.beta);
    second.converged = second.converged && first.converged;
    sols[eq_index] = std::move(second);
  });
  Matrix A(k, embed.Z.rows());
  for (Index eq = 0; eq < k; ++eq) A.row(eq) = sols[static_cast<std::size_t>(eq)].beta.transpose();
  return assemble(embed, std::move(A), rho, sols, Estimator::FglsLasso, cfg.lambda);
}

VarModel fit_ols_var(const LagEmbedding& embed) {
  check_embedding(embed);
  const Index k = embed.k();
  if (embed.Z.rows() > embed.n()) {
    throw Error("OLS needs at least K p = " + std::to_string(embed.Z.rows()) + " observations, have " +
                std::to_string(embed.n()));
  }
  const Matrix X = embed.Z.transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) throw Error("OLS: lagged regressors are collinear");
  const Matrix A = qr.solve(embed.Y.transpose()).transpose();
  std::vector<LassoSolution> sols(static_cast<std::size_t>(k));
  for (auto& s : sols) s.converged = true;
  return assemble(embed, A, std::nullopt, sols, Estimator::Ols, 0.0);
}

VarModel fit_var(const LagEmbedding& embed, Estimator estimator, const LassoConfig& cfg) {
  switch (estimator) {
    case Estimator::Ols: return fit_ols_var(embed);
    case Estimator::Lasso: return fit_lasso_var(embed, cfg);
    case Estimator::FglsLasso: return fit_fgls_lasso_var(embed, cfg);
  }
  throw Error("unknown estimator");
}

std::vector<VarModel> fit_var_path(const LagEmbedding& embed, Estimator estimator, const std::vector<double>& lambdas,
                                   const LassoConfig& cfg) {
  cfg.validate();
  check_embedding(embed);
  if (estimator == Estimator::Ols) {
    const VarModel ols = fit_ols_var(embed);
    return std::vector<VarModel>(lambdas.size(), ols);
  }
  const EmbeddingMoments moments(embed);
  const Index k = embed.k();
  const std::size_t n_lambda = lambdas.size();
  // sols[eq][i], rhos[eq][i]
  std::vector<std::vector<LassoSolution>> sols(static_cast<std::size_t>(k));
  std::vector<std::vector<double>> rhos(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t eq_index) {
    const auto eq = static_cast<Index>(eq_index);
    const LassoSolver stage1(moments.system(eq, 0.0));
    auto path = solve_path(stage1, lambdas, cfg);
    auto& out = sols[eq_index];
    out.reserve(n_lambda);
    if (estimator == Estimator::Lasso) {
      for (auto& pt : path) out.push_back(std::move(pt.solution));
      return;
    }
    const Vector y = embed.Y.row(eq).transpose();
    const Vector* warm = nullptr;
    for (std::size_t i = 0; i < n_lambda; ++i) {
      const Vector u = y - embed.Z.transpose() * path[i].solution.beta;
      const double r = lag1_autocorrelation(u);
      rhos[eq_index].push_back(r);
      const LassoSolver stage2(moments.system(eq, r));
      LassoSolution second = stage2.solve(lambdas[i], cfg, warm != nullptr ? warm : &path[i].solution.beta);
      second.converged = second.converged && path[i].solution.converged;
      out.push_back(std::move(second));
      warm = &out.back().beta;
    }
  });
  std::vector<VarModel> models;
  models.reserve(n_lambda);
  for (std::size_t i = 0; i < n_lambda; ++i) {
    Matrix A(k, embed.Z.rows());
    std::vector<LassoSolution> at(static_cast<std::size_t>(k));
    std::optional<Vector> rho;
    if (estimator == Estimator::FglsLasso) rho = Vector(k);
    for (Index eq = 0; eq < k; ++eq) {
      const auto e = static_cast<std::size_t>(eq);
      A.row(eq) = sols[e][i].beta.transpose();
      at[e].sweeps = sols[e][i].sweeps;
      at[e].converged = sols[e][i].converged;
      if (rho) (*rho)[eq] = rhos[e][i];
    }
    models.push_back(assemble(embed, std::move(A), std::move(rho), at, estimator, lambdas[i]));
  }
  return models;
}

VarModel fit_var(const TimePanel& panel, int p, Estimator estimator, const LassoConfig& cfg) {
  auto [standardized, stats] = standardize(panel);
  const LagEmbedding embed = lag_embed(standardized, p);
  VarModel model = fit_var(embed, estimator, cfg);
  model.names = panel.names;
  model.stats = std::move(stats);
  return model;
}

Matrix residuals(const VarModel& model, const LagEmbedding& embed) {
  if (model.A.rows() != embed.k() || model.A.cols() != embed.Z.rows()) {
    throw Error("model dimensions do not match embedding");
  }
  return embed.Y - model.A * embed.Z;
}

Matrix whitened_residuals(const VarModel& model, const LagEmbedding& embed) {
  return whiten_rows(residuals(model, embed), model.rho ? &*model.rho : nullptr);
}

double kkt_violation(const VarModel& model, const LagEmbedding& embed, double lambda) {
  if (model.A.rows() != embed.k() || model.A.cols() != embed.Z.rows()) {
    throw Error("kkt_violation: model dimensions do not match embedding");
  }
  const EmbeddingMoments moments(embed);
  double worst = 0.0;
  for (Index eq = 0; eq < embed.k(); ++eq) {
    const double r = model.rho ? (*model.rho)[eq] : 0.0;
    const LassoSolver solver(moments.system(eq, r));
    worst = std::max(worst, solver.kkt_violation(model.A.row(eq).transpose(), lambda));
  }
  return worst;
}

double lasso_objective(const Matrix& A, const LagEmbedding& embed, double lambda) {
  return (A * embed.Z - embed.Y).squaredNorm() / static_cast<double>(embed.n()) + lambda * A.cwiseAbs().sum();
}

double bic_value(double rss, Index n, Index nonzeros) {
  const auto nn = static_cast<double>(n);
  if (!(rss > 0.0)) return -std::numeric_limits<double>::infinity();
  return nn * std::log(rss / nn) + static_cast<double>(nonzeros) * std::log(nn);
}

BicScore bic_score(const VarModel& model, const LagEmbedding& embed) {
  const Matrix u = whitened_residuals(model, embed);
  BicScore score;
  score.per_equation.resize(embed.k());
  for (Index eq = 0; eq < embed.k(); ++eq) {
    const double rss = u.row(eq).squaredNorm();
    const Index s = (model.A.row(eq).array() != 0.0).count();
    score.per_equation[eq] = bic_value(rss, embed.n(), s);
    if (!(rss > 0.0)) score.degenerate = true;
  }
  score.total = score.per_equation.sum();
  return score;
}

}  // namespace sparsevar
