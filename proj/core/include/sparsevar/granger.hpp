#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparsevar/lasso.hpp"
#include "sparsevar/panel.hpp"

namespace sparsevar {

struct GrangerSpec {
  std::string effect;               // y_J
  std::vector<std::string> causes;  // the tested block I
  int p = 14;
  LambdaGrid grid;                  // per-stage lambda grid, tuned by BIC
  bool robust_lm = false;           // heteroskedasticity-robust LM variant
};

struct GrangerResult {
  std::string effect;
  std::vector<std::string> causes;
  double lm_statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
  Index n = 0;                                 // effective sample size T - p
  std::vector<std::string> selected_controls;  // labels "<series>.l<lag>"
  std::vector<double> lambda_used;             // outcome stage first, then one per tested regressor
};

/// Post-double-selection Granger test of "causes -> effect" in a VAR(p):
/// LASSO (BIC-tuned) of the effect on all lags outside the tested block, one
/// LASSO per tested lag regressor on the same controls, least squares on the
/// tested block plus the union of selected controls, and an LM test of the
/// tested block (N R^2 from the auxiliary regression of the restricted
/// residuals), referred to chi-squared with |causes| * p degrees of freedom.
/// The panel is standardized internally.
GrangerResult pds_granger(const TimePanel& panel, const GrangerSpec& spec, const LassoConfig& solver = {});

struct CausalEdge {
  std::string from;
  std::string to;
  double p_value = 1.0;
};

struct PairFailure {
  std::string from;
  std::string to;
  std::string message;
};

struct GrangerNetwork {
  std::vector<std::string> variables;
  Matrix p_values;  // rows = effect ("to"), cols = cause ("from"); NaN on the diagonal and for failed pairs
  std::vector<CausalEdge> edges;
  std::vector<PairFailure> failures;
  double threshold = 0.01;
};

struct NetworkOptions {
  int p = 14;
  double threshold = 0.01;
  LambdaGrid grid;
  bool robust_lm = false;
};

/// Tests every ordered pair of `variables` (all panel columns when empty) with
/// a singleton cause, conditioning on every other panel column. Edges are the
/// pairs with p-value strictly below the threshold. A failing pair is
/// recorded and skipped.
GrangerNetwork granger_network(const TimePanel& panel, const std::vector<std::string>& variables,
                               const NetworkOptions& options, const LassoConfig& solver = {});

/// Matrix CSV: header `to,<from...>`, one row per effect variable.
void write_granger_matrix(const std::filesystem::path& path, const GrangerNetwork& net);
/// Edge CSV: `from,to,p_value`.
void write_granger_edges(const std::filesystem::path& path, const GrangerNetwork& net);
/// Graphviz DOT digraph of the edge list.
void write_granger_dot(const std::filesystem::path& path, const GrangerNetwork& net);

}  // namespace sparsevar
