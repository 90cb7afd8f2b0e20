#include "doctest.h"

#include <cmath>
#include <vector>

#include "core/estimator.hpp"

using namespace pwe;

namespace {

EstimateSpec mst_spec() {
  EstimateSpec spec;
  spec.functional = Functional::MST;
  spec.dim = 2;
  spec.p = 1.0;
  return spec;
}

// Noiseless series following an exact law, for fit recovery checks.
std::vector<Estimate> synthetic_series(const std::vector<long>& ns,
                                       double (*law)(double), double se) {
  std::vector<Estimate> out;
  for (long n : ns) {
    Estimate e;
    e.dim = 2;
    e.p = 1.0;
    e.n = n;
    e.trials = 1;
    e.mean = law(static_cast<double>(n));
    e.std_error = se;
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("mc_mean degenerate cases") {
  const Estimate one = mc_mean(mst_spec(), 1, 8, SeedSpec{5}, 1);
  CHECK(one.mean == 0.0);
  CHECK(one.std_error == 0.0);
  CHECK(one.n == 1);
  CHECK(one.trials == 8);

  CHECK_THROWS_AS(mc_mean(mst_spec(), 16, 1, SeedSpec{5}, 1), UsageError);
}

TEST_CASE("mc_mean is a consistent estimator across seeds") {
  const Estimate a = mc_mean(mst_spec(), 64, 400, SeedSpec{101}, 1);
  const Estimate b = mc_mean(mst_spec(), 64, 400, SeedSpec{202}, 1);
  const double gap = std::abs(a.mean - b.mean);
  const double se = std::hypot(a.std_error, b.std_error);
  CHECK(gap <= 5.0 * se);
  CHECK(a.std_error > 0.0);
}

TEST_CASE("normalized tree length settles toward its limit from above") {
  // E L / sqrt(n) decreases toward its constant for the uniform square at
  // p = 1; compare widely separated sizes so the trend dominates the noise
  std::vector<double> norm;
  for (long n : {16L, 64L, 256L, 1024L}) {
    const Estimate e = mc_mean(mst_spec(), n, 60, SeedSpec{7}, 1);
    norm.push_back(e.mean / std::sqrt(static_cast<double>(n)));
    CHECK(norm.back() > 0.6);
    CHECK(norm.back() < 0.72);
  }
  CHECK(norm[0] > norm[2]);
  CHECK(norm[1] > norm[3]);
}

TEST_CASE("mc_mean is bit-identical across repeats and thread counts") {
  const Estimate a = mc_mean(mst_spec(), 48, 50, SeedSpec{9}, 1);
  const Estimate b = mc_mean(mst_spec(), 48, 50, SeedSpec{9}, 1);
  const Estimate c = mc_mean(mst_spec(), 48, 50, SeedSpec{9}, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
}

TEST_CASE("rate exponent") {
  CHECK(rate_exponent(2, 1.0) == doctest::Approx(0.5));
  CHECK(rate_exponent(3, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(rate_exponent(2, 2.0), UsageError);
  CHECK_THROWS_AS(rate_exponent(2, 0.0), UsageError);
}

TEST_CASE("fit_alpha recovers an exact power law") {
  const auto series = synthetic_series(
      {16, 64, 256, 1024, 4096},
      [](double n) { return 2.0 * std::sqrt(n) + 3.0; }, 1.0);
  const RateFit fit = fit_alpha(series, 2, 1.0);
  CHECK(fit.model == "pure_power");
  CHECK(fit.alpha_hat == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.c_hat == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.exponent_hat == doctest::Approx(0.5));
  CHECK(fit.residual_rms < 1e-8);
  CHECK(fit.ok());
}

TEST_CASE("fit_alpha tolerates noise at the stated level") {
  std::vector<Estimate> series = synthetic_series(
      {16, 64, 256, 1024, 4096},
      [](double n) { return 2.0 * std::sqrt(n) + 3.0; }, 0.05);
  // deterministic pseudo-noise at the declared stderr scale
  double sign = 1.0;
  for (Estimate& e : series) {
    e.mean += sign * 0.05;
    sign = -sign;
  }
  const RateFit fit = fit_alpha(series, 2, 1.0);
  CHECK(std::abs(fit.alpha_hat - 2.0) <= 5.0 * fit.alpha_se);
}

TEST_CASE("fit_alpha input validation") {
  const auto short_series = synthetic_series(
      {16, 64, 256}, [](double n) { return std::sqrt(n); }, 1.0);
  CHECK_THROWS_AS(fit_alpha(short_series, 2, 1.0), ConfigError);

  auto unsorted = synthetic_series(
      {16, 64, 256, 1024}, [](double n) { return std::sqrt(n); }, 1.0);
  std::swap(unsorted[1], unsorted[2]);
  CHECK_THROWS_AS(fit_alpha(unsorted, 2, 1.0), ConfigError);
}

TEST_CASE("fit_alpha picks the correction regressor by regime") {
  const auto series = synthetic_series(
      {16, 64, 256, 1024}, [](double n) { return std::sqrt(n); }, 1.0);
  CHECK(fit_alpha(series, 3, 1.0).model == "alpha_plus_correction");
  CHECK(fit_alpha(series, 3, 2.0).model == "power_with_log");
  CHECK(fit_alpha(series, 2, 1.0).model == "pure_power");
}

TEST_CASE("residual_rate recovers the correction exponent") {
  const auto with_correction = synthetic_series(
      {16, 64, 256, 1024, 4096},
      [](double n) { return 2.0 * std::sqrt(n) + 5.0 * std::pow(n, 0.25); }, 1e-6);
  const RateFit fit = residual_rate(with_correction, 2.0, 2, 1.0);
  CHECK(fit.ok());
  CHECK(fit.exponent_hat == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(fit.c_hat == doctest::Approx(5.0).epsilon(1e-6));

  const auto flat = synthetic_series(
      {16, 64, 256, 1024, 4096},
      [](double n) { return 2.0 * std::sqrt(n) + 3.0; }, 1e-6);
  const RateFit fit0 = residual_rate(flat, 2.0, 2, 1.0);
  CHECK(fit0.ok());
  CHECK(std::abs(fit0.exponent_hat) < 1e-6);
}

TEST_CASE("log slope excludes noise-dominated points") {
  GapSeries series;
  series.name = "closeness";
  for (long n : {16L, 64L, 256L, 1024L}) {
    GapPoint g;
    g.n = n;
    g.mean = 10.0 / static_cast<double>(n);
    g.std_error = (n == 1024) ? 1.0 : 1e-9;  // last point drowns in noise
    g.trials = 100;
    series.points.push_back(g);
  }
  const RateFit fit = fit_log_slope(series);
  CHECK(fit.ok());
  CHECK(fit.exponent_hat == doctest::Approx(-1.0).epsilon(1e-9));
  REQUIRE(fit.excluded.size() == 1);
  CHECK(fit.excluded[0] == 1024);
  CHECK(fit.n_grid.size() == 3);

  // with only two usable points the fit declines to report a slope
  series.points[1].std_error = 1.0;
  const RateFit weak = fit_log_slope(series);
  CHECK_FALSE(weak.ok());
  CHECK(weak.status == "inconclusive: fewer than 3 points above the noise floor");
}

TEST_CASE("csv formatting") {
  CHECK(csv_header() == "functional,variant,d,p,sampler,n,trials,mean,stderr,seed");
  Estimate e;
  e.functional = Functional::MST;
  e.variant = Variant::Plain;
  e.dim = 2;
  e.p = 1.0;
  e.sampler = "uniform";
  e.n = 64;
  e.trials = 400;
  e.mean = 0.5;
  e.std_error = 0.25;
  e.seed = 7;
  CHECK(csv_row(e) == "mst,plain,2,1,uniform,64,400,0.5,0.25,7");
}
