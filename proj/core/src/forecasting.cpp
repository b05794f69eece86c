#include "sparsevar/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "sparsevar/csv.hpp"
#include "sparsevar/error.hpp"
#include "sparsevar/parallel.hpp"

namespace sparsevar {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Index row_of(const TimePanel& panel, Date d, const char* what) {
  const auto it = std::lower_bound(panel.dates.begin(), panel.dates.end(), d);
  if (it == panel.dates.end() || *it != d) throw Error(std::string(what) + " " + format_date(d) + " not in panel");
  return static_cast<Index>(it - panel.dates.begin());
}

Matrix actuals_after(const TimePanel& panel, Index origin_row, int horizons) {
  Matrix out = Matrix::Constant(horizons, panel.cols(), kNaN);
  for (int h = 1; h <= horizons; ++h) {
    const Index r = origin_row + h;
    if (r < panel.rows()) out.row(h - 1) = panel.values.row(r);
  }
  return out;
}

}  // namespace

Matrix iterate_forecast_standardized(const Matrix& A, int p, const Matrix& history, int h) {
  const Index k = A.rows();
  if (h < 1) throw Error("forecast horizon must be >= 1");
  if (history.rows() != p) {
    throw Error("forecast history has " + std::to_string(history.rows()) + " rows, lag order is " + std::to_string(p));
  }
  if (history.cols() != k || A.cols() != k * p) throw Error("forecast history/model dimension mismatch");
  // Rolling window: rows [0, p) are history, rows p.. are forecasts.
  Matrix path(p + h, k);
  path.topRows(p) = history;
  for (int s = 0; s < h; ++s) {
    const Vector z = stacked_lags(path, p + s - 1, p);
    path.row(p + s) = (A * z).transpose();
  }
  return path.bottomRows(h);
}

Matrix iterate_forecast(const VarModel& model, const Matrix& history, int h, bool force) {
  if (!model.solver.converged && !force) {
    throw Error("refusing to forecast with a non-converged model (lambda " + std::to_string(model.solver.lambda) + ")");
  }
  const Index k = model.k();
  if (history.cols() != k) throw Error("forecast history has wrong number of series");
  Matrix z = history;
  for (Index j = 0; j < k; ++j) z.col(j) = (history.col(j).array() - model.stats.means[j]) / model.stats.sds[j];
  Matrix out = iterate_forecast_standardized(model.A, model.p, z, h);
  for (Index j = 0; j < k; ++j) out.col(j) = out.col(j).array() * model.stats.sds[j] + model.stats.means[j];
  return out;
}

ForecastSet recursive_exercise(const TimePanel& panel, const RecursiveConfig& cfg) {
  panel.validate();
  if (cfg.horizons < 1) throw Error("horizons must be >= 1");
  if (cfg.end_origin < cfg.start_origin) throw Error("end origin precedes start origin");
  const Index first = row_of(panel, cfg.start_origin, "start origin");
  const Index last = row_of(panel, cfg.end_origin, "end origin");
  const Index needed = cfg.p + std::max<Index>(cfg.plan.min_train, 1);
  if (first + 1 < needed) {
    throw Error("start origin " + format_date(cfg.start_origin) + " leaves " + std::to_string(first + 1) +
                " observations, need >= p + min_train = " + std::to_string(needed));
  }
  const bool lambda_free = cfg.estimator == Estimator::Ols || cfg.fixed_lambda;

  ForecastSet set;
  set.names = panel.names;
  set.horizons = cfg.horizons;
  const auto n_origins = static_cast<std::size_t>(last - first + 1);
  set.origins.resize(n_origins);
  set.values.resize(n_origins);
  set.actuals.resize(n_origins);
  set.lambdas.assign(n_origins, 0.0);
  set.train_rows.resize(n_origins);
  set.converged.assign(n_origins, true);

  auto choose_lambda = [&](Index origin_row) {
    if (lambda_free) return cfg.estimator == Estimator::Ols ? 0.0 : cfg.lasso.lambda;
    return select_lambda(panel.slice(0, origin_row + 1), cfg.p, cfg.lasso, cfg.plan, cfg.estimator).lambda_star;
  };
  const bool per_origin_cv = !lambda_free && cfg.refit == RefitPolicy::SelectEachOrigin;
  const double shared_lambda = per_origin_cv ? 0.0 : choose_lambda(first);

  std::vector<std::string> failures(n_origins);
  std::vector<char> converged(n_origins, 1);  // vector<bool> is not safe for concurrent writes
  parallel_for(n_origins, [&](std::size_t o) {
    const Index origin_row = first + static_cast<Index>(o);
    const TimePanel train = panel.slice(0, origin_row + 1);
    LassoConfig lc = cfg.lasso;
    lc.lambda = per_origin_cv ? choose_lambda(origin_row) : shared_lambda;
    const VarModel model = fit_var(train, cfg.p, cfg.estimator, lc);
    set.origins[o] = panel.dates[static_cast<std::size_t>(origin_row)];
    set.train_rows[o] = train.rows();
    set.lambdas[o] = lc.lambda;
    converged[o] = model.solver.converged ? 1 : 0;
    if (!model.solver.converged && !cfg.force_nonconverged) {
      failures[o] = format_date(set.origins[o]);
      return;
    }
    set.values[o] = iterate_forecast(model, train.values.bottomRows(cfg.p), cfg.horizons, true);
    set.actuals[o] = actuals_after(panel, origin_row, cfg.horizons);
  });
  for (std::size_t o = 0; o < n_origins; ++o) set.converged[o] = converged[o] != 0;
  std::string failed;
  for (const auto& f : failures) {
    if (!f.empty()) failed += (failed.empty() ? "" : ",") + f;
  }
  if (!failed.empty()) throw Error("non-converged fits at origins " + failed + " (use force to forecast anyway)");
  return set;
}

ForecastSet forecast_with_model(const TimePanel& panel, const VarModel& model, Date start_origin, Date end_origin,
                                int horizons, bool force) {
  panel.validate();
  model.validate();
  if (panel.cols() != model.k()) throw Error("model has " + std::to_string(model.k()) + " series, panel has " +
                                             std::to_string(panel.cols()));
  if (!model.names.empty() && model.names != panel.names) throw Error("model series names do not match the panel");
  const Index first = row_of(panel, start_origin, "start origin");
  const Index last = row_of(panel, end_origin, "end origin");
  if (last < first) throw Error("end origin precedes start origin");
  if (first + 1 < model.p) throw Error("start origin leaves fewer than p observations");
  ForecastSet set;
  set.names = panel.names;
  set.horizons = horizons;
  for (Index r = first; r <= last; ++r) {
    set.origins.push_back(panel.dates[static_cast<std::size_t>(r)]);
    set.values.push_back(iterate_forecast(model, panel.values.middleRows(r - model.p + 1, model.p), horizons, force));
    set.actuals.push_back(actuals_after(panel, r, horizons));
    set.lambdas.push_back(model.solver.lambda);
    set.train_rows.push_back(r + 1);
    set.converged.push_back(model.solver.converged);
  }
  return set;
}

void write_forecasts(std::ostream& out, const ForecastSet& set) {
  out << "origin,horizon,series,forecast,actual\n";
  for (std::size_t o = 0; o < set.origins.size(); ++o) {
    const std::string origin = format_date(set.origins[o]);
    for (int h = 1; h <= set.horizons; ++h) {
      for (std::size_t k = 0; k < set.names.size(); ++k) {
        const auto kk = static_cast<Index>(k);
        const double actual = set.actuals[o](h - 1, kk);
        out << origin << ',' << h << ',' << csv::escape(set.names[k]) << ','
            << csv::format_double(set.values[o](h - 1, kk)) << ','
            << (std::isnan(actual) ? std::string() : csv::format_double(actual)) << '\n';
      }
    }
  }
}

void write_forecasts(const std::filesystem::path& path, const ForecastSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_forecasts(out, set);
}

ForecastSet read_forecasts(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto oc = table.column("origin");
  const auto hc = table.column("horizon");
  const auto sc = table.column("series");
  const auto fc = table.column("forecast");
  const auto ac = table.column("actual");
  ForecastSet set;
  std::map<Date, std::size_t> origin_index;
  std::map<std::string, std::size_t> series_index;
  int max_h = 0;
  for (const auto& row : table.rows) {
    origin_index.emplace(parse_date(row[oc]), 0);
    if (series_index.emplace(row[sc], set.names.size()).second) set.names.push_back(row[sc]);
    const double h = csv::parse_double(row[hc], path.string() + " horizon");
    if (h < 1 || h != std::floor(h)) throw Error(path.string() + ": invalid horizon '" + row[hc] + "'");
    max_h = std::max(max_h, static_cast<int>(h));
  }
  if (origin_index.empty()) throw Error(path.string() + ": no forecasts");
  for (auto& [date, idx] : origin_index) {
    idx = set.origins.size();
    set.origins.push_back(date);
  }
  set.horizons = max_h;
  const auto k = static_cast<Index>(set.names.size());
  set.values.assign(set.origins.size(), Matrix::Constant(max_h, k, kNaN));
  set.actuals.assign(set.origins.size(), Matrix::Constant(max_h, k, kNaN));
  for (const auto& row : table.rows) {
    const std::size_t o = origin_index.at(parse_date(row[oc]));
    const int h = static_cast<int>(csv::parse_double(row[hc], path.string()));
    const auto j = static_cast<Index>(series_index.at(row[sc]));
    set.values[o](h - 1, j) = csv::parse_double(row[fc], path.string() + " forecast at " + row[oc]);
    if (!row[ac].empty() && row[ac] != "NA" && row[ac] != "nan") {
      set.actuals[o](h - 1, j) = csv::parse_double(row[ac], path.string() + " actual at " + row[oc]);
    }
  }
  for (std::size_t o = 0; o < set.origins.size(); ++o) {
    if (set.values[o].hasNaN()) {
      throw Error(path.string() + ": incomplete forecast grid at origin " + format_date(set.origins[o]));
    }
  }
  set.lambdas.assign(set.origins.size(), 0.0);
  set.train_rows.assign(set.origins.size(), 0);
  set.converged.assign(set.origins.size(), true);
  return set;
}

}  // namespace sparsevar
