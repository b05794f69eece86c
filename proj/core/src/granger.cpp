#include "sparsevar/granger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "sparsevar/csv.hpp"
#include "sparsevar/error.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/parallel.hpp"
#include "sparsevar/var_model.hpp"

namespace sparsevar {
namespace {

struct Selection {
  std::vector<Index> support;  // indices into the control design
  double lambda = 0.0;
};

// BIC-tuned LASSO of y on the rows of `controls` (regressors in rows).
Selection bic_select(const LassoSolver& solver, const LambdaGrid& grid, const LassoConfig& cfg) {
  Selection best;
  const double lmax = solver.lambda_max();
  if (!(lmax > 0.0) || solver.system().dim() == 0) return best;
  const auto lambdas = lambda_grid(lmax, grid);
  const auto path = solve_path(solver, lambdas, cfg);
  double best_bic = std::numeric_limits<double>::infinity();
  bool have = false;
  for (const auto& pt : path) {
    const Vector& beta = pt.solution.beta;
    const Index nnz = (beta.array() != 0.0).count();
    const double bic = bic_value(solver.rss(beta), solver.system().n, nnz);
    // Strict improvement keeps the larger lambda on ties.
    if (!have || bic < best_bic) {
      best_bic = bic;
      best.lambda = pt.lambda;
      best.support.clear();
      for (Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) best.support.push_back(j);
      }
      have = true;
    }
  }
  return best;
}

std::string lag_label(const std::string& name, int lag) { return name + ".l" + std::to_string(lag); }

}  // namespace

GrangerResult pds_granger(const TimePanel& panel, const GrangerSpec& spec, const LassoConfig& solver_cfg) {
  solver_cfg.validate();
  if (spec.p < 1) throw Error("granger: lag order must be >= 1");
  if (spec.causes.empty()) throw Error("granger: empty cause block");
  const Index effect = panel.column(spec.effect);
  std::set<Index> cause_cols;
  for (const auto& c : spec.causes) {
    if (c == spec.effect) throw Error("granger: effect '" + spec.effect + "' cannot be part of its own cause block");
    if (!cause_cols.insert(panel.column(c)).second) throw Error("granger: cause '" + c + "' listed twice");
  }

  const auto [standardized, stats] = standardize(panel);
  const LagEmbedding embed = lag_embed(standardized, spec.p);
  const Index k = panel.cols();
  const Index n = embed.n();

  // Partition the lag regressors (rows of Z, lag-major) into the tested block and controls.
  std::vector<Index> tested, candidates;
  std::vector<std::string> labels(static_cast<std::size_t>(embed.Z.rows()));
  for (int lag = 1; lag <= spec.p; ++lag) {
    for (Index v = 0; v < k; ++v) {
      const Index row = (lag - 1) * k + v;
      labels[static_cast<std::size_t>(row)] = lag_label(panel.names[static_cast<std::size_t>(v)], lag);
      (cause_cols.count(v) ? tested : candidates).push_back(row);
    }
  }
  Matrix controls_rows(static_cast<Index>(candidates.size()), n);
  for (std::size_t i = 0; i < candidates.size(); ++i) controls_rows.row(static_cast<Index>(i)) = embed.Z.row(candidates[i]);
  const Matrix control_gram = controls_rows * controls_rows.transpose();

  auto system_for = [&](const Vector& y) {
    GramSystem s;
    s.gram = control_gram;
    s.xty = controls_rows * y;
    s.yty = y.squaredNorm();
    s.n = n;
    return s;
  };

  GrangerResult result;
  result.effect = spec.effect;
  result.causes = spec.causes;
  result.n = n;

  const Vector y = embed.Y.row(effect).transpose();
  std::set<Index> selected;
  {
    const Selection sel = bic_select(LassoSolver(system_for(y)), spec.grid, solver_cfg);
    result.lambda_used.push_back(sel.lambda);
    selected.insert(sel.support.begin(), sel.support.end());
  }
  for (Index g : tested) {
    const Vector x = embed.Z.row(g).transpose();
    const Selection sel = bic_select(LassoSolver(system_for(x)), spec.grid, solver_cfg);
    result.lambda_used.push_back(sel.lambda);
    selected.insert(sel.support.begin(), sel.support.end());
  }
  for (Index c : selected) result.selected_controls.push_back(labels[static_cast<std::size_t>(candidates[static_cast<std::size_t>(c)])]);

  // Post-selection design: the tested block always, then the selected controls.
  const auto n_tested = static_cast<Index>(tested.size());
  const auto n_controls = static_cast<Index>(selected.size());
  result.dof = static_cast<int>(n_tested);
  if (result.dof != static_cast<int>(spec.causes.size()) * spec.p) {
    throw Error("granger: internal error, tested block size differs from |causes| * p");
  }
  if (n_tested + n_controls >= n) {
    throw Error("granger: " + std::to_string(n_tested + n_controls) + " post-selection regressors for " +
                std::to_string(n) + " observations; raise the lambda floor (smaller grid ratio range)");
  }
  Matrix X(n, n_tested + n_controls);
  std::vector<std::string> x_labels;
  for (Index i = 0; i < n_tested; ++i) {
    X.col(i) = embed.Z.row(tested[static_cast<std::size_t>(i)]).transpose();
    x_labels.push_back(labels[static_cast<std::size_t>(tested[static_cast<std::size_t>(i)])]);
  }
  {
    Index c = n_tested;
    for (Index s : selected) {
      X.col(c++) = controls_rows.row(s).transpose();
      x_labels.push_back(labels[static_cast<std::size_t>(candidates[static_cast<std::size_t>(s)])]);
    }
  }
  const auto collinear = collinear_columns(X);
  if (!collinear.empty()) {
    std::string names;
    for (Index c : collinear) names += (names.empty() ? "" : ", ") + x_labels[static_cast<std::size_t>(c)];
    throw Error("granger: singular post-selection design, collinear columns: " + names);
  }

  const Matrix Xc = X.rightCols(n_controls);
  const Vector restricted = n_controls > 0 ? Vector(least_squares(Xc, y).residuals) : y;
  const double denom = restricted.squaredNorm();
  if (!(denom > 0.0)) throw Error("granger: restricted residuals are identically zero");

  double lm = 0.0;
  if (!spec.robust_lm) {
    const OlsFit aux = least_squares(X, restricted);
    const double r2 = 1.0 - aux.rss / denom;
    lm = static_cast<double>(n) * r2;
  } else {
    // Partial the tested regressors on the controls, then regress 1 on u * r.
    Matrix scores(n, n_tested);
    for (Index i = 0; i < n_tested; ++i) {
      const Vector xi = X.col(i);
      const Vector ri = n_controls > 0 ? Vector(least_squares(Xc, xi).residuals) : xi;
      scores.col(i) = restricted.array() * ri.array();
    }
    const OlsFit aux = least_squares(scores, Vector::Ones(n));
    lm = static_cast<double>(n) - aux.rss;
  }
  result.lm_statistic = std::max(lm, 0.0);
  result.p_value = chi_squared_sf(result.lm_statistic, static_cast<double>(result.dof));
  return result;
}

GrangerNetwork granger_network(const TimePanel& panel, const std::vector<std::string>& variables,
                               const NetworkOptions& options, const LassoConfig& solver) {
  GrangerNetwork net;
  net.variables = variables.empty() ? panel.names : variables;
  net.threshold = options.threshold;
  for (const auto& v : net.variables) panel.column(v);
  const auto m = static_cast<Index>(net.variables.size());
  net.p_values = Matrix::Constant(m, m, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::pair<Index, Index>> pairs;  // (to, from)
  for (Index to = 0; to < m; ++to) {
    for (Index from = 0; from < m; ++from) {
      if (to != from) pairs.emplace_back(to, from);
    }
  }
  std::vector<std::string> errors(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [to, from] = pairs[i];
    GrangerSpec spec;
    spec.effect = net.variables[static_cast<std::size_t>(to)];
    spec.causes = {net.variables[static_cast<std::size_t>(from)]};
    spec.p = options.p;
    spec.grid = options.grid;
    spec.robust_lm = options.robust_lm;
    try {
      net.p_values(to, from) = pds_granger(panel, spec, solver).p_value;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [to, from] = pairs[i];
    const auto& from_name = net.variables[static_cast<std::size_t>(from)];
    const auto& to_name = net.variables[static_cast<std::size_t>(to)];
    if (!errors[i].empty()) {
      net.failures.push_back({from_name, to_name, errors[i]});
      continue;
    }
    const double pv = net.p_values(to, from);
    if (pv < options.threshold) net.edges.push_back({from_name, to_name, pv});
  }
  return net;
}

void write_granger_matrix(const std::filesystem::path& path, const GrangerNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "to";
  for (const auto& v : net.variables) out << ',' << csv::escape(v);
  out << '\n';
  for (Index r = 0; r < net.p_values.rows(); ++r) {
    out << csv::escape(net.variables[static_cast<std::size_t>(r)]);
    for (Index c = 0; c < net.p_values.cols(); ++c) {
      const double v = net.p_values(r, c);
      out << ',' << (std::isnan(v) ? std::string() : csv::format_double(v));
    }
    out << '\n';
  }
}

void write_granger_edges(const std::filesystem::path& path, const GrangerNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "from,to,p_value\n";
  for (const auto& e : net.edges) {
    out << csv::escape(e.from) << ',' << csv::escape(e.to) << ',' << csv::format_double(e.p_value) << '\n';
  }
}

void write_granger_dot(const std::filesystem::path& path, const GrangerNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "digraph granger {\n";
  for (const auto& v : net.variables) out << "  \"" << v << "\";\n";
  for (const auto& e : net.edges) {
    out << "  \"" << e.from << "\" -> \"" << e.to << "\" [label=\"" << csv::format_double(e.p_value) << "\"];\n";
  }
  out << "}\n";
}

}  // namespace sparsevar
