#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace pwe {

// ---------------------------------------------------------------------------
// Reproducible randomness.
//
// Every experiment owns a single 64-bit seed.  The generator for trial t at
// sample size n is seeded with
//
//   mix(mix(mix(seed) ^ (K1 + n)) ^ (K2 + t))
//
// where mix is the splitmix64 finalizer and K1, K2 are fixed odd constants.
// Streams for distinct (seed, n, trial) triples are therefore independent,
// while a paired experiment can re-derive the stream of its base size and
// draw additional points from it (the first n points of the extended draw
// coincide with the original sample).
// ---------------------------------------------------------------------------

uint64_t mix64(uint64_t z);
uint64_t derive_stream_seed(uint64_t experiment_seed, uint64_t n, uint64_t trial);

struct SeedSpec {
  uint64_t experiment_seed = 0;
};

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1) from the top 53 bits; identical on every platform.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

Rng make_stream(const SeedSpec& seed, uint64_t n, uint64_t trial);

// ---------------------------------------------------------------------------
// Samplers (all produce points in the unit box [0,1]^d)
// ---------------------------------------------------------------------------

PointSet sample_uniform(Rng& rng, int n, int dim);

// Exact Poisson count: plain inversion for mean <= 30, otherwise a sum of
// independent inversion draws over mean-30 chunks (Poisson additivity keeps
// the distribution exact; no normal approximation anywhere).
int poisson_count(Rng& rng, double mean);

PointSet sample_poisson(Rng& rng, double intensity, int dim);

// ---------------------------------------------------------------------------
// Densities on the unit box
// ---------------------------------------------------------------------------

// Piecewise-constant density on the m^d congruent cells.  weights[i] is the
// density value on cell i (row-major, first coordinate slowest); validity
// requires nonnegative weights with sum(weights) * m^-d == 1 within 1e-9.
struct BlockDensity {
  int m = 1;
  int dim = 1;
  std::vector<double> weights;

  BlockDensity() = default;
  BlockDensity(int m_, int dim_, std::vector<double> w);

  int cells() const { return static_cast<int>(weights.size()); }
  double cell_prob(int i) const;        // weights[i] * m^-d
  double value_at(const double* x) const;
};

PointSet sample_block(Rng& rng, int n, const BlockDensity& density);

// One-parameter density family f_a(x) = 1 + a (x_1 - 1/2) on [0,1]^d,
// |a| <= 2.  Lies in the Holder class with exponent 1 and constant |a|.
struct HolderDensity {
  double a = 0.0;
  int dim = 2;

  HolderDensity() = default;
  HolderDensity(double a_, int dim_);

  double beta() const { return 1.0; }
  double holder_constant() const { return std::abs(a); }
  double value_at(const double* x) const { return 1.0 + a * (x[0] - 0.5); }
};

PointSet sample_holder(Rng& rng, int n, const HolderDensity& density);

// Cell averages of a density: weights[i] = m^d * integral over cell i.
// Closed form for the affine family; tensor Gauss quadrature for a generic
// integrand.
BlockDensity approximate_block(const HolderDensity& density, int m);
BlockDensity approximate_block_quadrature(const std::function<double(const double*)>& f,
                                          int dim, int m);

// integral over [0,1]^d of |f_a - phi|; exact per-cell closed form (the
// integrand is affine inside each cell).
double l1_gap(const HolderDensity& density, const BlockDensity& approx);

// integral of the density raised to power q; exact sum for block densities,
// adaptive quadrature (abs error well below 1e-6) for the affine family.
double density_power_integral(const BlockDensity& density, double q);
double density_power_integral(const HolderDensity& density, double q);

// Adaptive Simpson on [lo,hi] with absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

// Text format: first line "m d", then the m^d weights in row-major order.
BlockDensity read_block_density_text(const std::string& text);
std::string write_block_density_text(const BlockDensity& density);

}  // namespace pwe
