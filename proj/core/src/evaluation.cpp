#include "sparsevar/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "sparsevar/csv.hpp"
#include "sparsevar/error.hpp"
#include "sparsevar/linalg.hpp"

namespace sparsevar {
namespace {

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double rmse(std::span<const double> errors) {
  if (errors.empty()) throw Error("rmse of an empty series");
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

double mda(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size()) throw Error("mda: actual and forecast differ in length");
  if (actual.size() < 2) throw Error("mda needs at least 2 points");
  std::size_t hits = 0;
  for (std::size_t t = 1; t < actual.size(); ++t) {
    if (sign(actual[t] - actual[t - 1]) == sign(forecast[t] - forecast[t - 1])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(actual.size() - 1);
}

double mda_stepwise(std::span<const double> actual_now, std::span<const double> actual_prev,
                    std::span<const double> forecast_now, std::span<const double> forecast_prev) {
  const std::size_t n = actual_now.size();
  if (actual_prev.size() != n || forecast_now.size() != n || forecast_prev.size() != n) {
    throw Error("mda: inputs differ in length");
  }
  if (n == 0) throw Error("mda of an empty series");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (sign(actual_now[t] - actual_prev[t]) == sign(forecast_now[t] - forecast_prev[t])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

EpaResult epa_test(std::span<const double> e1, std::span<const double> e2, int h) {
  if (e1.size() != e2.size()) throw Error("epa_test: error series differ in length");
  if (h < 1) throw Error("epa_test: horizon must be >= 1");
  const auto n = static_cast<Index>(e1.size());
  if (n < 10) throw Error("epa_test needs at least 10 aligned errors, got " + std::to_string(n));
  const auto H = static_cast<double>(n);
  EpaResult r;
  r.loss.resize(n);
  for (Index t = 0; t < n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    r.loss[t] = e1[i] * e1[i] - e2[i] * e2[i];
  }
  const double mean = r.loss.mean();
  const Vector centered = r.loss.array() - mean;
  auto autocov = [&](Index lag) {
    return centered.tail(n - lag).dot(centered.head(n - lag)) / H;
  };
  double omega = autocov(0);
  for (int j = 1; j <= h - 1 && j < n; ++j) {
    omega += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(h)) * autocov(j);
  }
  if (!(omega > 0.0)) {
    r.statistic = 0.0;
    r.dm = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.dm = mean / std::sqrt(omega / H);
  const double hh = static_cast<double>(h);
  const double correction = std::sqrt((H + 1.0 - 2.0 * hh + hh * (hh - 1.0) / H) / H);
  r.statistic = r.dm * correction;
  r.p_value = std::clamp(2.0 * (1.0 - normal_cdf(std::abs(r.statistic))), 0.0, 1.0);
  return r;
}

std::string star_marks(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

const EvalCell& EvalPanel::at(const std::string& model, const std::string& series, int horizon) const {
  for (const auto& c : cells) {
    if (c.model == model && c.series == series && c.horizon == horizon) return c;
  }
  throw Error("no evaluation cell for " + model + "/" + series + "/h=" + std::to_string(horizon));
}

namespace {

struct Aligned {
  std::vector<Date> origins;
  std::vector<double> actual, forecast, error;
};

// Points of one (series, horizon) that have an actual value, in origin order.
Aligned collect(const ForecastSet& set, Index series, int h) {
  Aligned a;
  for (std::size_t o = 0; o < set.origins.size(); ++o) {
    const double act = set.actuals[o](h - 1, series);
    if (std::isnan(act)) continue;
    const double f = set.values[o](h - 1, series);
    a.origins.push_back(set.origins[o]);
    a.actual.push_back(act);
    a.forecast.push_back(f);
    a.error.push_back(act - f);
  }
  return a;
}

// Actual value observed on a given date, looked up from any forecast row that targets it.
std::map<Date, Vector> actual_by_date(const ForecastSet& set) {
  std::map<Date, Vector> out;
  for (std::size_t o = 0; o < set.origins.size(); ++o) {
    for (int h = 1; h <= set.horizons; ++h) {
      const Vector row = set.actuals[o].row(h - 1).transpose();
      if (!row.hasNaN()) out.emplace(set.target_date(o, h), row);
    }
  }
  return out;
}

double within_path_mda(const ForecastSet& set, Index series, int h, const std::map<Date, Vector>& actuals) {
  std::vector<double> an, ap, fn, fp;
  for (std::size_t o = 0; o < set.origins.size(); ++o) {
    const double now = set.actuals[o](h - 1, series);
    if (std::isnan(now)) continue;
    const auto prev_it = actuals.find(set.target_date(o, h - 1));
    if (prev_it == actuals.end()) continue;
    const double prev_actual = prev_it->second[series];
    an.push_back(now);
    ap.push_back(prev_actual);
    fn.push_back(set.values[o](h - 1, series));
    fp.push_back(h == 1 ? prev_actual : set.values[o](h - 2, series));
  }
  if (an.empty()) throw Error("within-path MDA: no actual values at the forecast origins");
  return mda_stepwise(an, ap, fn, fp);
}

}  // namespace

EvalPanel evaluate(const std::vector<NamedForecasts>& models, const EvalOptions& options) {
  if (models.empty()) throw Error("evaluate: no forecast sets");
  const auto& names = models.front().set.names;
  for (const auto& m : models) {
    if (m.set.names != names) throw Error("evaluate: model '" + m.model + "' covers different series");
  }
  const NamedForecasts* bench = nullptr;
  if (options.benchmark) {
    for (const auto& m : models) {
      if (m.model == *options.benchmark) bench = &m;
    }
    if (bench == nullptr) throw Error("evaluate: benchmark model '" + *options.benchmark + "' not supplied");
  }
  EvalPanel panel;
  for (const auto& m : models) {
    const auto actuals = options.mda_form == MdaForm::WithinPath ? actual_by_date(m.set) : std::map<Date, Vector>{};
    for (int h = 1; h <= m.set.horizons; ++h) {
      double rmse_sum = 0.0, mda_sum = 0.0;
      Index total = 0;
      for (std::size_t s = 0; s < names.size(); ++s) {
        const auto series = static_cast<Index>(s);
        const Aligned a = collect(m.set, series, h);
        if (a.error.size() < 2) {
          throw Error("evaluate: model '" + m.model + "' series '" + names[s] + "' horizon " + std::to_string(h) +
                      " has fewer than 2 forecasts with actuals");
        }
        EvalCell cell;
        cell.model = m.model;
        cell.series = names[s];
        cell.horizon = h;
        cell.rmse = rmse(a.error);
        cell.mda = options.mda_form == MdaForm::ConsecutiveOrigins ? mda(a.actual, a.forecast)
                                                                   : within_path_mda(m.set, series, h, actuals);
        cell.count = static_cast<Index>(a.error.size());
        if (bench != nullptr && &m != bench && h <= bench->set.horizons) {
          const Aligned b = collect(bench->set, series, h);
          std::vector<double> e1, e2;
          std::size_t j = 0;
          for (std::size_t i = 0; i < a.origins.size(); ++i) {
            while (j < b.origins.size() && b.origins[j] < a.origins[i]) ++j;
            if (j < b.origins.size() && b.origins[j] == a.origins[i]) {
              e1.push_back(a.error[i]);
              e2.push_back(b.error[j]);
            }
          }
          if (e1.size() >= 10) cell.epa = epa_test(e1, e2, h);
        }
        rmse_sum += cell.rmse;
        mda_sum += cell.mda;
        total += cell.count;
        panel.cells.push_back(std::move(cell));
      }
      EvalCell avg;
      avg.model = m.model;
      avg.series = "average";
      avg.horizon = h;
      avg.rmse = rmse_sum / static_cast<double>(names.size());
      avg.mda = mda_sum / static_cast<double>(names.size());
      avg.count = total;
      panel.cells.push_back(std::move(avg));
    }
  }
  return panel;
}

void write_eval_report(std::ostream& out, const EvalPanel& panel) {
  out << "model,series,horizon,metric,value,stars\n";
  for (const auto& c : panel.cells) {
    const std::string prefix = csv::escape(c.model) + "," + csv::escape(c.series) + "," + std::to_string(c.horizon) + ",";
    out << prefix << "rmse," << csv::format_double(c.rmse) << ',' << (c.epa ? star_marks(c.epa->p_value) : "") << '\n';
    out << prefix << "mda," << csv::format_double(c.mda) << ",\n";
    out << prefix << "n," << c.count << ",\n";
    if (c.epa) {
      out << prefix << "epa_stat," << csv::format_double(c.epa->statistic) << ",\n";
      out << prefix << "epa_p," << csv::format_double(c.epa->p_value) << ',' << star_marks(c.epa->p_value) << '\n';
    }
  }
}

void write_eval_report(const std::filesystem::path& path, const EvalPanel& panel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_eval_report(out, panel);
}

}  // namespace sparsevar
