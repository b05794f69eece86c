#include "sparsevar/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>

#include "sparsevar/error.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/model_io.hpp"
#include "sparsevar/random.hpp"

namespace sparsevar {
namespace {
constexpr double kTargetRadius = 0.95;
constexpr int kMaxShrinkSteps = 200;
}  // namespace

void SyntheticSpec::validate() const {
  std::vector<std::string> problems;
  if (k < 1) problems.push_back("K must be >= 1");
  if (p < 1) problems.push_back("p must be >= 1");
  if (t < 1) problems.push_back("T must be >= 1");
  if (burn_in < 0) problems.push_back("burn-in must be >= 0");
  if (!(innovation_sd >= 0.0)) problems.push_back("innovation sd must be >= 0");
  if (error == ErrorKind::Ar1 && !(std::abs(rho) < 1.0)) problems.push_back("AR(1) error rho must satisfy |rho| < 1");
  if (!A && !(recipe.density > 0.0 && recipe.density <= 1.0)) problems.push_back("density must lie in (0, 1]");
  if (!names.empty() && static_cast<Index>(names.size()) != k) problems.push_back("names must have K entries");
  if (initial_state && (initial_state->rows() != p || initial_state->cols() != k)) {
    problems.push_back("initial state must be p x K");
  }
  if (A) {
    if (A->rows() != k || A->cols() != k * p) {
      problems.push_back("A must be K x Kp");
    } else if (companion_spectral_radius(*A, p) >= 1.0) {
      problems.push_back("A is not stationary (companion spectral radius >= 1)");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid synthetic spec: ";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw Error(msg);
  }
}

Matrix make_sparse_var(Index k, int p, const SparseRecipe& recipe) {
  if (k < 1 || p < 1) throw Error("make_sparse_var: K and p must be >= 1");
  if (!(recipe.density > 0.0 && recipe.density <= 1.0)) throw Error("make_sparse_var: density must lie in (0, 1]");
  const Index total = k * k * p;
  const Index nnz = std::max<Index>(1, static_cast<Index>(std::llround(recipe.density * static_cast<double>(total))));
  CounterRng rng(recipe.seed, 0x5350415253455641ULL);
  std::vector<Index> cells(static_cast<std::size_t>(total));
  std::iota(cells.begin(), cells.end(), Index{0});
  // Partial Fisher-Yates: the first nnz cells are the support.
  for (Index i = 0; i < nnz; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(total - i)));
    std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
  }
  Matrix A = Matrix::Zero(k, k * p);
  for (Index i = 0; i < nnz; ++i) {
    const Index cell = cells[static_cast<std::size_t>(i)];
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    A(cell / (k * p), cell % (k * p)) = sign * recipe.magnitude;
  }
  for (int step = 0; step < kMaxShrinkSteps; ++step) {
    const double radius = companion_spectral_radius(A, p);
    if (radius <= kTargetRadius) return A;
    A *= kTargetRadius / radius * (1.0 - 1e-9);
  }
  throw Error("make_sparse_var: could not stabilize coefficients after bounded rescaling");
}

SyntheticPanel simulate(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticPanel out;
  out.p = spec.p;
  out.error = spec.error;
  out.rho = spec.error == ErrorKind::Ar1 ? spec.rho : 0.0;
  out.seed = spec.seed;
  out.innovation_sd = spec.innovation_sd;
  out.A = spec.A ? *spec.A : make_sparse_var(spec.k, spec.p, spec.recipe);

  const Index k = spec.k;
  const int p = spec.p;
  const Index steps = spec.burn_in + spec.t;
  Matrix path = Matrix::Zero(p + steps, k);
  if (spec.initial_state) path.topRows(p) = *spec.initial_state;
  CounterRng rng(spec.seed, 0x53494D554C415445ULL);
  Vector u = Vector::Zero(k);
  for (Index s = 0; s < steps; ++s) {
    const Index row = p + s;
    for (Index j = 0; j < k; ++j) {
      const double e = spec.innovation_sd == 0.0 ? 0.0 : spec.innovation_sd * rng.normal();
      u[j] = out.rho * u[j] + e;
    }
    Vector y = u;
    for (int lag = 1; lag <= p; ++lag) y.noalias() += out.A.middleCols((lag - 1) * k, k) * path.row(row - lag).transpose();
    path.row(row) = y.transpose();
  }

  TimePanel& panel = out.panel;
  panel.values = path.bottomRows(spec.t);
  if (spec.names.empty()) {
    for (Index j = 0; j < k; ++j) panel.names.push_back("y" + std::to_string(j + 1));
  } else {
    panel.names = spec.names;
  }
  for (Index t = 0; t < spec.t; ++t) panel.dates.push_back(spec.start_date + std::chrono::days{static_cast<int>(t)});
  panel.validate();
  return out;
}

void write_truth(const std::filesystem::path& path, const SyntheticPanel& sim) {
  VarModel m;
  m.p = sim.p;
  m.names = sim.panel.names;
  m.A = sim.A;
  m.sigma_u = sim.innovation_sd * sim.innovation_sd * Matrix::Identity(sim.A.rows(), sim.A.rows());
  m.stats = StandardizationStats::identity(sim.A.rows());
  m.solver.estimator = "truth";
  auto j = nlohmann::json::parse(model_to_json(m));
  j["error"] = sim.error == ErrorKind::Ar1 ? "ar1" : "iid";
  j["error_rho"] = sim.rho;
  j["seed"] = sim.seed;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

}  // namespace sparsevar
