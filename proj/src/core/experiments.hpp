#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/estimator.hpp"

namespace pwe {

// Paired E[L - L*] on identical samples. Every sample is also checked for
// per-instance domination; a negative gap beyond tolerance throws.
GapSeries closeness_gap(Functional f, int dim, double p, const std::vector<long>& n_grid,
                        long trials, SeedSpec seed, int threads);

// Paired E[L(U_{n+k}) - L(U_n)] with U_{n+k} extending U_n's stream; the
// series is indexed by k (GapPoint::n holds k). k = 0 is exactly zero.
GapSeries add_k_gap(Functional f, int dim, double p, long n, const std::vector<long>& k_list,
                    long trials, SeedSpec seed, int threads);

// Paired E[L(P_n) - L(U_n)] where P_n has Poisson(n) points sharing U_n's
// stream. The plain paired mean is noise-dominated (the count difference
// swamps it), so the estimate is the intercept of a regression on the
// zero-mean covariates N-n and (N-n)^2-n, which preserves the mean and
// removes the variance explained by the count.
GapSeries poissonization_gap(Functional f, int dim, double p,
                             const std::vector<long>& n_grid,
                             const std::vector<long>& trials_per_n, SeedSpec seed,
                             int threads);

struct BoundarySeries {
  GapSeries nb;  // E N_B per n
  GapSeries lb;  // E L_B per n
};

// Tree dual diagnostics over a grid.
BoundarySeries boundary_growth(int dim, double p, const std::vector<long>& n_grid,
                               long trials, SeedSpec seed, int threads);

struct NonuniformResult {
  GapSeries gaps;        // per-n |mean/n^nu - alpha * integral|
  double integral = 0.0; // integral of density^nu
  RateFit slope;         // log-slope of the gap series
  std::vector<Estimate> estimates;
};

// Sampling from a fixed block density; the mean of L/n^nu should approach
// alpha * integral(density^nu).
NonuniformResult block_density_experiment(Functional f, const BlockDensity& density,
                                          double p, const std::vector<long>& n_grid,
                                          long trials, double alpha_hat, double alpha_se,
                                          SeedSpec seed, int threads);

// Sampling from per-n block approximations of a smooth density with
// m(n) = n^{1/(beta (d-p) + d)} cells per axis.
NonuniformResult holder_density_experiment(Functional f, const HolderDensity& density,
                                           double p, const std::vector<long>& n_grid,
                                           long trials, double alpha_hat, double alpha_se,
                                           SeedSpec seed, int threads);

long holder_block_m(long n, double beta, int d, double p);

struct DensityApproxRow {
  double a = 0.0;
  int m = 1;
  double gap = 0.0;    // integral |f_a - block approximation|
  double bound = 0.0;  // d^{beta/2} K m^{-beta}
  bool ok = true;
};

std::vector<DensityApproxRow> density_approx_table(const std::vector<double>& a_list,
                                                   const std::vector<int>& m_list, int dim,
                                                   double k_override);
std::string format_density_approx(const std::vector<DensityApproxRow>& rows);

// Self-contained log-log SVG scatter with the fitted power-law line.
std::string render_loglog_svg(const GapSeries& series, const RateFit& fit,
                              const std::string& title);

// Aggregates CSV rows (schema from estimator) into a per-group summary.
std::string summarize_csv(const std::vector<std::string>& csv_texts);

}  // namespace pwe
