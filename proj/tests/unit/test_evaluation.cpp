#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sparsevar/error.hpp"
#include "sparsevar/evaluation.hpp"
#include "sparsevar/linalg.hpp"

using namespace sparsevar;

namespace {

std::vector<double> draw(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

ForecastSet fake_set(const std::vector<std::string>& names, int n_origins, int horizons, std::uint64_t seed,
                     double noise) {
  ForecastSet set;
  set.names = names;
  set.horizons = horizons;
  CounterRng truth(1234, 0), rng(seed, 1);
  const auto k = static_cast<Index>(names.size());
  const Date d0 = parse_date("2022-01-01");
  for (int o = 0; o < n_origins; ++o) {
    set.origins.push_back(d0 + std::chrono::days{o});
    Matrix a(horizons, k), f(horizons, k);
    for (int h = 0; h < horizons; ++h)
      for (Index j = 0; j < k; ++j) {
        a(h, j) = truth.normal();
        f(h, j) = a(h, j) + noise * rng.normal();
      }
    set.actuals.push_back(a);
    set.values.push_back(f);
    set.lambdas.push_back(0.0);
    set.train_rows.push_back(100 + o);
    set.converged.push_back(true);
  }
  return set;
}

}  // namespace

TEST_CASE("rmse hand values") {
  CHECK(rmse(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  CHECK(rmse(std::vector<double>{3.0, 4.0}) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
  CHECK(rmse(std::vector<double>{-2.5, -2.5, -2.5}) == 2.5);
  CHECK_THROWS_AS(rmse(std::vector<double>{}), Error);
}

TEST_CASE("mda hand values") {
  const std::vector<double> a{0, 1, 0, 1};
  CHECK(mda(a, a) == 1.0);
  CHECK(mda(a, std::vector<double>{0, 1, 2, 1}) == doctest::Approx(1.0 / 3.0));
  std::vector<double> neg(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) neg[i] = -a[i];
  CHECK(mda(a, neg) == 0.0);
  // sign(0) only matches sign(0).
  CHECK(mda(std::vector<double>{1, 1, 2}, std::vector<double>{0, 0, 1}) == 1.0);
  CHECK(mda(std::vector<double>{1, 1, 2}, std::vector<double>{0, 1, 1}) == 0.0);
  CHECK_THROWS_AS(mda(std::vector<double>{1, 2}, std::vector<double>{1}), Error);
  CHECK_THROWS_AS(mda(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST_CASE("rmse and mda against brute force") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto a = draw(40, s, 0);
    const auto f = draw(40, s, 1);
    std::vector<double> e(40);
    for (std::size_t i = 0; i < 40; ++i) e[i] = a[i] - f[i];
    CHECK(rmse(e) == doctest::Approx(oracle::brute_rmse(e)).epsilon(1e-15));
    CHECK(mda(a, f) == oracle::brute_mda(a, f));
    // Scale equivariance and shift invariance.
    std::vector<double> scaled(40), a2(40), f2(40);
    for (std::size_t i = 0; i < 40; ++i) {
      scaled[i] = -3.0 * e[i];
      a2[i] = a[i] + 7.0;
      f2[i] = f[i] + 7.0;
    }
    CHECK(rmse(scaled) == doctest::Approx(3.0 * rmse(e)).epsilon(1e-14));
    CHECK(mda(a2, f2) == doctest::Approx(mda(a, f)));
  }
}

TEST_CASE("epa_test basics") {
  const auto e = draw(50, 1, 0);
  const auto same = epa_test(e, e, 1);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK_THROWS_AS(epa_test(draw(9, 1, 0), draw(9, 1, 1), 1), Error);
  CHECK_THROWS_AS(epa_test(draw(20, 1, 0), draw(19, 1, 1), 1), Error);
  CHECK_THROWS_AS(epa_test(e, e, 0), Error);

  // h = 1: corrected statistic is the DM statistic times sqrt((H-1)/H).
  const auto other = draw(50, 1, 1);
  const auto r = epa_test(e, other, 1);
  CHECK(r.statistic == doctest::Approx(r.dm * std::sqrt(49.0 / 50.0)).epsilon(1e-14));
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < 50; ++i) mean += e[i] * e[i] - other[i] * other[i];
  mean /= 50.0;
  for (std::size_t i = 0; i < 50; ++i) var += std::pow(e[i] * e[i] - other[i] * other[i] - mean, 2);
  var /= 50.0;
  CHECK(r.dm == doctest::Approx(mean / std::sqrt(var / 50.0)).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(2.0 * (1.0 - normal_cdf(std::abs(r.statistic)))).epsilon(1e-12));
}

TEST_CASE("epa_test Bartlett HAC for h = 3") {
  const auto e1 = draw(30, 4, 0), e2 = draw(30, 4, 1);
  const auto r = epa_test(e1, e2, 3);
  std::vector<double> d(30);
  double mean = 0.0;
  for (std::size_t i = 0; i < 30; ++i) mean += d[i] = e1[i] * e1[i] - e2[i] * e2[i];
  mean /= 30.0;
  auto gamma = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t t = j; t < 30; ++t) s += (d[t] - mean) * (d[t - j] - mean);
    return s / 30.0;
  };
  const double omega = gamma(0) + 2.0 * ((1.0 - 1.0 / 3.0) * gamma(1) + (1.0 - 2.0 / 3.0) * gamma(2));
  const double dm = mean / std::sqrt(omega / 30.0);
  CHECK(r.dm == doctest::Approx(dm).epsilon(1e-12));
  CHECK(r.statistic == doctest::Approx(dm * std::sqrt((30.0 + 1.0 - 6.0 + 6.0 / 30.0) / 30.0)).epsilon(1e-12));
}

TEST_CASE("epa_test antisymmetry and size") {
  int rejects = 0;
  for (std::uint64_t rep = 0; rep < 500; ++rep) {
    const auto a = draw(100, 900 + rep, 0), b = draw(100, 900 + rep, 1);
    const auto ab = epa_test(a, b, 1), ba = epa_test(b, a, 1);
    CHECK(ab.statistic == -ba.statistic);
    CHECK(ab.p_value == ba.p_value);
    if (ab.p_value < 0.05) ++rejects;
  }
  CHECK(rejects >= 10);
  CHECK(rejects <= 40);
}

TEST_CASE("star marks") {
  CHECK(star_marks(0.005) == "***");
  CHECK(star_marks(0.01) == "**");
  CHECK(star_marks(0.049) == "**");
  CHECK(star_marks(0.05) == "*");
  CHECK(star_marks(0.0999) == "*");
  CHECK(star_marks(0.10) == "");
  CHECK(star_marks(0.5) == "");
}

TEST_CASE("evaluate builds the panel with an average row") {
  const std::vector<std::string> names{"a", "b", "c"};
  std::vector<NamedForecasts> models{{"good", fake_set(names, 30, 2, 5, 0.2)}, {"bad", fake_set(names, 30, 2, 6, 1.5)}};
  EvalOptions opt;
  opt.benchmark = "bad";
  const auto panel = evaluate(models, opt);
  for (const auto& m : {"good", "bad"}) {
    for (int h = 1; h <= 2; ++h) {
      double r = 0.0, d = 0.0;
      for (const auto& s : names) {
        const auto& c = panel.at(m, s, h);
        CHECK(c.count == 30);
        CHECK(c.rmse >= 0.0);
        CHECK(c.mda >= 0.0);
        CHECK(c.mda <= 1.0);
        r += c.rmse;
        d += c.mda;
      }
      CHECK(panel.at(m, "average", h).rmse == doctest::Approx(r / 3.0).epsilon(1e-15));
      CHECK(panel.at(m, "average", h).mda == doctest::Approx(d / 3.0).epsilon(1e-15));
    }
  }
  const auto& g = panel.at("good", "a", 1);
  REQUIRE(g.epa.has_value());
  CHECK(g.epa->statistic < 0.0);
  CHECK(g.epa->p_value < 0.01);
  CHECK_FALSE(panel.at("bad", "a", 1).epa.has_value());

  // Direct recomputation of one cell.
  std::vector<double> e, a, f;
  for (std::size_t o = 0; o < 30; ++o) {
    e.push_back(models[0].set.actuals[o](0, 1) - models[0].set.values[o](0, 1));
    a.push_back(models[0].set.actuals[o](0, 1));
    f.push_back(models[0].set.values[o](0, 1));
  }
  CHECK(panel.at("good", "b", 1).rmse == rmse(e));
  CHECK(panel.at("good", "b", 1).mda == mda(a, f));

  std::ostringstream out;
  write_eval_report(out, panel);
  CHECK(out.str().rfind("model,series,horizon,metric,value,stars\n", 0) == 0);
  CHECK(out.str().find("good,a,1,rmse,") != std::string::npos);
  CHECK(out.str().find("good,average,2,mda,") != std::string::npos);
  CHECK_THROWS_AS(panel.at("good", "zzz", 1), Error);
}

TEST_CASE("perfect forecasts score MDA 1 and RMSE 0") {
  auto set = fake_set({"x"}, 15, 1, 2, 0.0);
  const auto panel = evaluate({{"oracle", set}});
  CHECK(panel.at("oracle", "x", 1).mda == 1.0);
  CHECK(panel.at("oracle", "x", 1).rmse == 0.0);
}

TEST_CASE("within-path MDA form") {
  ForecastSet set;
  set.names = {"x"};
  set.horizons = 2;
  set.origins = {parse_date("2022-01-01"), parse_date("2022-01-02")};
  Matrix a0(2, 1), f0(2, 1), a1(2, 1), f1(2, 1);
  a0 << 1.0, 2.0;
  f0 << 0.5, 0.7;  // h2 step: f up, actual up
  a1 << 2.0, 1.0;
  f1 << 3.0, 3.5;  // h2 step: f up, actual down
  set.actuals = {a0, a1};
  set.values = {f0, f1};
  set.lambdas = {0, 0};
  set.train_rows = {10, 11};
  set.converged = {true, true};
  EvalOptions opt;
  opt.mda_form = MdaForm::WithinPath;
  const auto panel = evaluate({{"m", set}}, opt);
  CHECK(panel.at("m", "x", 2).mda == 0.5);
}

TEST_CASE("mismatched series are rejected") {
  std::vector<NamedForecasts> models{{"a", fake_set({"x", "y"}, 12, 1, 1, 0.1)}, {"b", fake_set({"x"}, 12, 1, 2, 0.1)}};
  CHECK_THROWS_AS(evaluate(models), Error);
}
