#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsevar/forecasting.hpp"

namespace sparsevar {

/// sqrt of the mean squared error. Throws on empty input.
double rmse(std::span<const double> errors);

/// Fraction of consecutive steps where sign(actual[t+1] - actual[t]) equals
/// sign(forecast[t+1] - forecast[t]), with sign(0) = 0 (a zero only matches a zero).
double mda(std::span<const double> actual, std::span<const double> forecast);

/// Per-step variant: fraction of points where sign(actual_now - actual_prev)
/// equals sign(forecast_now - forecast_prev).
double mda_stepwise(std::span<const double> actual_now, std::span<const double> actual_prev,
                    std::span<const double> forecast_now, std::span<const double> forecast_prev);

struct EpaResult {
  double statistic = 0.0;  // Harvey-corrected DM statistic
  double dm = 0.0;         // uncorrected
  double p_value = 1.0;    // two-sided, standard normal
  Vector loss;             // d_t = e1_t^2 - e2_t^2
};

/// Equal predictive accuracy test on squared-error loss differentials with a
/// Bartlett HAC variance (truncation lag h-1) and the Harvey small-sample
/// factor sqrt((H + 1 - 2h + h(h-1)/H) / H). Negative statistics favour e1.
EpaResult epa_test(std::span<const double> e1, std::span<const double> e2, int h);

/// "***" below 1%, "**" below 5%, "*" below 10%, otherwise "".
std::string star_marks(double p_value);

enum class MdaForm {
  ConsecutiveOrigins,  // differences across successive origins at a fixed horizon
  WithinPath           // forecast h minus forecast h-1 (h = 1 uses the actual at the origin)
};

struct NamedForecasts {
  std::string model;
  ForecastSet set;
};

struct EvalCell {
  std::string model;
  std::string series;  // "average" for the cross-series mean row
  int horizon = 0;
  double rmse = 0.0;
  double mda = 0.0;
  Index count = 0;     // evaluated points (summed over series in the average row)
  std::optional<EpaResult> epa;  // against the benchmark model
};

struct EvalOptions {
  std::optional<std::string> benchmark;
  MdaForm mda_form = MdaForm::ConsecutiveOrigins;
};

struct EvalPanel {
  std::vector<EvalCell> cells;

  const EvalCell& at(const std::string& model, const std::string& series, int horizon) const;
};

/// RMSE, MDA and (optionally) EPA tests against a benchmark for every
/// (model, series, horizon). All models must cover the same series; EPA uses
/// the origins both models share. Per model and horizon an "average" row holds
/// the plain mean of the per-series RMSE and MDA values.
EvalPanel evaluate(const std::vector<NamedForecasts>& models, const EvalOptions& options = {});

/// Rows `model,series,horizon,metric,value,stars` with metrics rmse, mda and n.
void write_eval_report(std::ostream& out, const EvalPanel& panel);
void write_eval_report(const std::filesystem::path& path, const EvalPanel& panel);

}  // namespace sparsevar
