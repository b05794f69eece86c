#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparsevar/cross_validation.hpp"
#include "sparsevar/var_model.hpp"

namespace sparsevar {

// Point forecasts by origin. values[o](h-1, k) is the h-step forecast of
// series k made at origins[o], in original units; actuals has the same layout
// with NaN where the target date lies beyond the data.
struct ForecastSet {
  std::vector<std::string> names;
  std::vector<Date> origins;
  int horizons = 0;
  std::vector<Matrix> values;
  std::vector<Matrix> actuals;
  std::vector<double> lambdas;      // per origin (0 for OLS / fixed models)
  std::vector<Index> train_rows;    // observations used for each origin's fit
  std::vector<bool> converged;      // solver status per origin

  Date target_date(std::size_t origin_index, int horizon) const {
    return origins[origin_index] + std::chrono::days{horizon};
  }
};

/// Iterates y_{T+s} = A_1 y_{T+s-1} + ... + A_p y_{T+s-p} in the model's
/// standardized space for s = 1..h. `history` holds the last p observations
/// in original units, oldest first; the result (h x K) is in original units.
/// Throws if the model is flagged non-converged unless `force` is set.
Matrix iterate_forecast(const VarModel& model, const Matrix& history, int h, bool force = false);

/// Same recursion on already standardized history with no destandardization.
Matrix iterate_forecast_standardized(const Matrix& A, int p, const Matrix& history, int h);

enum class RefitPolicy {
  SelectOnce,      // cross-validate lambda at the first origin, then hold it fixed
  SelectEachOrigin
};

struct RecursiveConfig {
  int p = 14;
  Estimator estimator = Estimator::Lasso;
  LassoConfig lasso;
  bool fixed_lambda = false;  // use lasso.lambda as is, no cross-validation
  WalkForwardPlan plan;
  Date start_origin;
  Date end_origin;
  int horizons = 4;
  RefitPolicy refit = RefitPolicy::SelectOnce;
  bool force_nonconverged = false;
};

/// Expanding-origin out-of-sample exercise. For each panel date o in
/// [start_origin, end_origin] the model is re-estimated on every observation
/// dated <= o and forecasts for o+1..o+H are recorded with aligned actuals.
ForecastSet recursive_exercise(const TimePanel& panel, const RecursiveConfig& cfg);

/// Same origin loop with a fixed, already estimated model (no refits).
ForecastSet forecast_with_model(const TimePanel& panel, const VarModel& model, Date start_origin, Date end_origin,
                                int horizons, bool force = false);

// Forecast CSV: origin,horizon,series,forecast,actual (actual empty when unknown).
void write_forecasts(const std::filesystem::path& path, const ForecastSet& set);
void write_forecasts(std::ostream& out, const ForecastSet& set);
ForecastSet read_forecasts(const std::filesystem::path& path);

}  // namespace sparsevar
