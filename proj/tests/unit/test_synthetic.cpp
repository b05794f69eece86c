#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fixtures.hpp"
#include "sparsevar/descriptive.hpp"
#include "sparsevar/error.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/model_io.hpp"
#include "sparsevar/synthetic.hpp"

using namespace sparsevar;

TEST_CASE("counter rng is deterministic and stream-separated") {
  CounterRng a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CounterRng u(9, 0);
  double mean = 0.0, sq = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double z = u.normal();
    mean += z;
    sq += z * z;
  }
  CHECK(std::abs(mean / 1e5) < 0.02);
  CHECK(std::abs(sq / 1e5 - 1.0) < 0.02);
}

TEST_CASE("make_sparse_var support and stability") {
  const Matrix a = make_sparse_var(10, 2, {0.1, 0.3, 42});
  const Matrix b = make_sparse_var(10, 2, {0.1, 0.3, 42});
  CHECK(a == b);
  CHECK((a.array() != 0.0).count() == 20);
  CHECK(companion_spectral_radius(a, 2) <= 0.95);

  const Matrix full = make_sparse_var(3, 1, {1.0, 0.2, 1});
  CHECK((full.array() != 0.0).count() == 9);
  CHECK(full.cwiseAbs().maxCoeff() == doctest::Approx(0.2));

  const Matrix hot = make_sparse_var(6, 2, {1.0, 0.9, 3});
  CHECK(companion_spectral_radius(hot, 2) <= 0.95);
  CHECK(companion_spectral_radius(hot, 2) > 0.9);
}

TEST_CASE("spec validation lists problems") {
  SyntheticSpec spec;
  spec.k = 0;
  spec.error = ErrorKind::Ar1;
  spec.rho = 1.5;
  try {
    spec.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    const std::string m = e.what();
    CHECK(m.find("K") != std::string::npos);
    CHECK(m.find("rho") != std::string::npos);
  }
  SyntheticSpec explosive;
  explosive.k = 1;
  explosive.A = Matrix::Constant(1, 1, 1.2);
  CHECK_THROWS_AS(explosive.validate(), Error);
}

TEST_CASE("simulate is deterministic per seed") {
  SyntheticSpec spec;
  spec.k = 4;
  spec.p = 2;
  spec.t = 300;
  spec.seed = 17;
  const auto a = simulate(spec), b = simulate(spec);
  CHECK(a.panel.values == b.panel.values);
  spec.seed = 18;
  CHECK(simulate(spec).panel.values != a.panel.values);
  CHECK(a.panel.names == std::vector<std::string>{"y1", "y2", "y3", "y4"});
  CHECK(format_date(a.panel.dates.front()) == "2018-01-01");
}

TEST_CASE("lag-1 autocovariance matches A Var(y)") {
  Matrix A(2, 2);
  A << 0.5, 0.2, -0.1, 0.3;
  SyntheticSpec spec;
  spec.k = 2;
  spec.p = 1;
  spec.t = 200000;
  spec.A = A;
  spec.seed = 4;
  const Matrix y = simulate(spec).panel.values;
  const Index n = y.rows();
  const Matrix g0 = y.transpose() * y / static_cast<double>(n);
  const Matrix g1 = y.bottomRows(n - 1).transpose() * y.topRows(n - 1) / static_cast<double>(n - 1);
  CHECK((g1 - A * g0).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("AR(1) errors carry the requested autocorrelation") {
  SyntheticSpec spec;
  spec.k = 2;
  spec.p = 1;
  spec.t = 50000;
  spec.A = Matrix::Zero(2, 2);
  spec.error = ErrorKind::Ar1;
  spec.rho = 0.6;
  const auto sim = simulate(spec);
  for (Index j = 0; j < 2; ++j) {
    const Vector u = sim.panel.values.col(j);
    const double r = u.tail(u.size() - 1).dot(u.head(u.size() - 1)) / u.squaredNorm();
    CHECK(std::abs(r - 0.6) < 0.02);
  }
}

TEST_CASE("simulated stationary panels reject a unit root") {
  int rejected = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticSpec spec;
    spec.k = 3;
    spec.p = 2;
    spec.t = 2000;
    spec.seed = seed;
    spec.recipe = {0.3, 0.3, seed};
    const auto sim = simulate(spec);
    for (Index j = 0; j < 3; ++j) {
      ++total;
      if (adf_statistic(sim.panel.values.col(j), 1) < -2.86) ++rejected;
    }
  }
  CHECK(rejected >= 0.95 * total);
}

TEST_CASE("truth JSON reads back as a model") {
  SyntheticSpec spec;
  spec.k = 3;
  spec.p = 2;
  spec.t = 50;
  spec.innovation_sd = 2.0;
  const auto sim = simulate(spec);
  const auto path = std::filesystem::temp_directory_path() / "sparsevar_truth.json";
  write_truth(path, sim);
  const auto m = read_model(path);
  std::filesystem::remove(path);
  CHECK(m.A == sim.A);
  CHECK(m.p == 2);
  CHECK(m.names == sim.panel.names);
  CHECK(m.sigma_u(0, 0) == 4.0);
  CHECK(m.stats.means.isZero(0.0));
}
