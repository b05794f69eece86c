#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sparsevar/panel.hpp"

namespace sparsevar {

struct SparseRecipe {
  double density = 0.1;    // fraction of nonzero entries in [A_1 ... A_p], in (0, 1]
  double magnitude = 0.3;  // |entry| before any stabilizing rescale
  std::uint64_t seed = 1;
};

enum class ErrorKind { Iid, Ar1 };

struct SyntheticSpec {
  Index k = 2;
  int p = 1;
  Index t = 500;
  std::optional<Matrix> A;  // K x Kp; drawn from `recipe` when absent
  SparseRecipe recipe;
  ErrorKind error = ErrorKind::Iid;
  double rho = 0.0;  // AR(1) error parameter when error == Ar1
  double innovation_sd = 1.0;
  std::uint64_t seed = 1;
  int burn_in = 200;
  std::optional<Matrix> initial_state;  // p x K, oldest first; zeros when absent
  Date start_date = Date{std::chrono::year{2018} / 1 / 1};
  std::vector<std::string> names;  // defaults to y1..yK

  /// Checks dimensions, |rho| < 1, density range and (for explicit A)
  /// stationarity of the companion matrix. Lists every violation.
  void validate() const;
};

/// Random support of round(density * K * K p) entries (at least one), each
/// +/- magnitude with random sign, shrunk uniformly until the companion
/// spectral radius is <= 0.95. Deterministic per recipe.seed.
Matrix make_sparse_var(Index k, int p, const SparseRecipe& recipe);

struct SyntheticPanel {
  TimePanel panel;
  Matrix A;
  int p = 1;
  ErrorKind error = ErrorKind::Iid;
  double rho = 0.0;
  double innovation_sd = 1.0;
  std::uint64_t seed = 0;
};

/// y_t = sum_i A_i y_{t-i} + u_t, u_t = rho u_{t-1} + e_t (rho = 0 for iid),
/// e_t ~ N(0, sd^2 I). The first burn_in generated rows are discarded.
SyntheticPanel simulate(const SyntheticSpec& spec);

/// Ground truth as a model JSON document (identity standardization) with
/// extra keys "error", "error_rho" and "seed".
void write_truth(const std::filesystem::path& path, const SyntheticPanel& sim);

}  // namespace sparsevar
