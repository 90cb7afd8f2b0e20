#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/sampling.hpp"
#include "core/solvers.hpp"

namespace pwe {

// Point source for Monte Carlo trials. Poisson draws a Poisson(n) count and
// that many uniform points, so n acts as the intensity.
struct SamplerSpec {
  enum class Kind { Uniform, Poisson, Block, Holder };
  Kind kind = Kind::Uniform;
  BlockDensity block;
  HolderDensity holder;

  std::string label() const;
  PointSet draw(Rng& rng, long n, int dim) const;
};

struct EstimateSpec {
  Functional functional = Functional::MST;
  Variant variant = Variant::Plain;
  Mode mode = Mode::Exact;
  BoundaryFactor factor = BoundaryFactor::Auto;
  int dim = 2;
  double p = 1.0;
  SamplerSpec sampler;
  SolveLimits limits;
};

struct Estimate {
  Functional functional = Functional::MST;
  Variant variant = Variant::Plain;
  int dim = 2;
  double p = 1.0;
  std::string sampler = "uniform";
  long n = 0;
  long trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
  uint64_t seed = 0;
};

// Mean of the solved value over independent trials; trial t draws from the
// stream (seed, n, t). Results are reduced in trial order with compensated
// summation, so the estimate is identical at any thread count.
Estimate mc_mean(const EstimateSpec& spec, long n, long trials, SeedSpec seed,
                 int threads);

// Exponent of the leading term: (d - p) / d.
double rate_exponent(int d, double p);

struct RateFit {
  std::string model;  // alpha_plus_correction | pure_power | power_with_log
  double alpha_hat = 0.0;
  double alpha_se = 0.0;
  double c_hat = 0.0;
  double exponent_hat = 0.0;
  double residual_rms = 0.0;
  std::vector<long> n_grid;
  std::vector<long> excluded;  // grid points dropped as noise-dominated
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

// Weighted least squares of mean_n on [n^{(d-p)/d}, regime correction,
// constant]; the correction regressor is n^{(d-1-p)/d} for 0 < p < d-1 and
// log n for p = d-1 != 1, otherwise the constant absorbs it. Weights are
// 1/stderr^2. Needs >= 4 strictly increasing grid points.
RateFit fit_alpha(const std::vector<Estimate>& series, int d, double p);

// Fits log|mean_n - alpha * n^{(d-p)/d}| against log n. Residuals smaller
// than 3 stderr are excluded as noise-dominated; fewer than 3 usable points
// gives status "inconclusive", not a failure.
RateFit residual_rate(const std::vector<Estimate>& series, double alpha_hat, int d,
                      double p);

struct GapPoint {
  long n = 0;  // grid value (sample size, or k for perturbation series)
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

struct GapSeries {
  std::string name;
  std::vector<GapPoint> points;
};

// log|mean| vs log n slope with the same noise-exclusion rule as
// residual_rate.
RateFit fit_log_slope(const GapSeries& series);

// CSV schema: functional,variant,d,p,sampler,n,trials,mean,stderr,seed
std::string csv_header();
std::string csv_row(const Estimate& e);
std::string format_rate_fit(const RateFit& fit, const std::string& title);

}  // namespace pwe
