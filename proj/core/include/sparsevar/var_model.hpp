#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsevar/lasso.hpp"
#include "sparsevar/panel.hpp"

namespace sparsevar {

enum class Estimator { Ols, Lasso, FglsLasso };

std::string to_string(Estimator e);
Estimator parse_estimator(std::string_view text);  // "ols" | "lasso" | "fgls-lasso"

struct SolverInfo {
  std::string estimator = "lasso";
  double lambda = 0.0;
  int sweeps = 0;         // worst case over equations
  bool converged = true;  // false if any equation hit max_sweeps
  std::vector<std::vector<double>> objective_traces;  // per equation, when recorded
};

// Estimated VAR(p) in standardized units: y_t = A_1 y_{t-1} + ... + A_p y_{t-p} + u_t.
struct VarModel {
  int p = 0;
  std::vector<std::string> names;
  Matrix A;        // K x (K p), [A_1, ..., A_p]
  Matrix sigma_u;  // K x K
  std::optional<Vector> rho;  // per-equation AR(1) error parameter (FGLS only)
  StandardizationStats stats;
  SolverInfo solver;

  Index k() const { return A.rows(); }
  Matrix lag(int i) const { return A.middleCols((i - 1) * k(), k()); }

  /// Checks shapes, symmetry/PSD of sigma_u and |rho| < 1.
  void validate() const;
};

// Per-equation sufficient statistics of a lag embedding. Produces the Gram
// system of equation k after the Prais-Winsten AR(1) quasi-difference with
// parameter rho in O((Kp)^2), without re-touching the data.
class EmbeddingMoments {
 public:
  explicit EmbeddingMoments(const LagEmbedding& embed);

  GramSystem system(Index equation, double rho) const;
  Index n() const { return n_; }

 private:
  Index n_ = 0;
  Matrix gram_;       // Z Z^T
  Matrix cross_lag_;  // sum_{t>=1} z_t z_{t-1}^T + transpose
  Vector z_first_, z_last_;
  Matrix zy_;         // Z Y^T
  Matrix zy_mixed_;   // sum_{t>=1} (z_t y_{t-1}^T + z_{t-1} y_t^T)
  Vector yy_;         // per equation sum y_t^2
  Vector yy_lag_;     // per equation sum_{t>=1} y_t y_{t-1}
  Vector y_first_, y_last_;
};

/// Applies the Prais-Winsten transform along a series: first element scaled
/// by sqrt(1 - rho^2), element t replaced by x_t - rho x_{t-1}.
Vector prais_winsten(const Vector& series, double rho);

/// Lag-1 sample autocorrelation sum u_t u_{t-1} / sum u_t^2, clipped to
/// [-0.99, 0.99]; 0 for an all-zero series.
double lag1_autocorrelation(const Vector& u);

/// Largest lambda that still leaves some coefficient nonzero: max |(2/N) Y Z^T|.
double lambda_max(const LagEmbedding& embed);

VarModel fit_lasso_var(const LagEmbedding& embed, const LassoConfig& cfg);
VarModel fit_fgls_lasso_var(const LagEmbedding& embed, const LassoConfig& cfg);
VarModel fit_ols_var(const LagEmbedding& embed);
VarModel fit_var(const LagEmbedding& embed, Estimator estimator, const LassoConfig& cfg);

/// Warm-started fits along `lambdas` (ideally decreasing). Ols ignores the grid
/// and returns one model per entry.
std::vector<VarModel> fit_var_path(const LagEmbedding& embed, Estimator estimator, const std::vector<double>& lambdas,
                                   const LassoConfig& cfg);

/// Standardizes the panel, embeds it and fits; the model carries the panel's
/// series names and standardization statistics.
VarModel fit_var(const TimePanel& panel, int p, Estimator estimator, const LassoConfig& cfg);

/// Y - A Z.
Matrix residuals(const VarModel& model, const LagEmbedding& embed);

/// Residuals after the model's AR(1) quasi-difference (plain residuals when
/// the model has no rho).
Matrix whitened_residuals(const VarModel& model, const LagEmbedding& embed);

/// Worst violation of the optimality conditions of the penalized objective at
/// the model's coefficients (on whitened data when the model carries rho).
double kkt_violation(const VarModel& model, const LagEmbedding& embed, double lambda);

/// Value of (1/N)||A Z - Y||^2 + lambda ||A||_1 (entrywise L1).
double lasso_objective(const Matrix& A, const LagEmbedding& embed, double lambda);

struct BicScore {
  Vector per_equation;
  double total = 0.0;
  bool degenerate = false;  // some RSS was zero; affected entries are -infinity
};

/// Per equation N ln(RSS_k / N) + s_k ln N with N = T - p and s_k the number of
/// nonzero coefficients in row k.
BicScore bic_score(const VarModel& model, const LagEmbedding& embed);
double bic_value(double rss, Index n, Index nonzeros);

}  // namespace sparsevar
