#pragma once

// Shared synthetic inputs for tests.

#include <cstdint>

#include "sparsevar/panel.hpp"
#include "sparsevar/random.hpp"
#include "sparsevar/synthetic.hpp"

namespace fixtures {

using sparsevar::Index;
using sparsevar::Matrix;

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed, std::uint64_t stream = 0) {
  sparsevar::CounterRng rng(seed, stream);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

// Standardized lag embedding of a simulated sparse VAR.
inline sparsevar::LagEmbedding sparse_var_embedding(Index k, int p, Index t, std::uint64_t seed,
                                                    double density = 0.3, double magnitude = 0.3) {
  sparsevar::SyntheticSpec spec;
  spec.k = k;
  spec.p = p;
  spec.t = t;
  spec.seed = seed;
  spec.recipe = {density, magnitude, seed * 7919 + 1};
  const auto sim = sparsevar::simulate(spec);
  auto [z, stats] = sparsevar::standardize(sim.panel);
  return sparsevar::lag_embed(z, p);
}

inline sparsevar::TimePanel panel_from(const Matrix& values, const char* start = "2019-01-01") {
  sparsevar::TimePanel p;
  p.values = values;
  const auto d0 = sparsevar::parse_date(start);
  for (Index t = 0; t < values.rows(); ++t) p.dates.push_back(d0 + std::chrono::days{static_cast<int>(t)});
  for (Index j = 0; j < values.cols(); ++j) p.names.push_back("v" + std::to_string(j + 1));
  return p;
}

}  // namespace fixtures
