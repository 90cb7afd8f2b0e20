#include "core/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace pwe {

uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t derive_stream_seed(uint64_t experiment_seed, uint64_t n, uint64_t trial) {
  uint64_t s = mix64(experiment_seed);
  s = mix64(s ^ (0xA0761D6478BD642FULL + n));
  s = mix64(s ^ (0xE7037ED1A0B428DBULL + trial));
  return s;
}

Rng make_stream(const SeedSpec& seed, uint64_t n, uint64_t trial) {
  return Rng(derive_stream_seed(seed.experiment_seed, n, trial));
}

PointSet sample_uniform(Rng& rng, int n, int dim) {
  if (n < 0) throw UsageError("sample_uniform: n must be >= 0");
  PointSet out(dim);
  out.coords.reserve(static_cast<size_t>(n) * dim);
  for (int i = 0; i < n * dim; ++i) out.coords.push_back(rng.uniform01());
  return out;
}

namespace {

// Multiplicative inversion; exact for small means (e^-mean stays normal).
int poisson_inversion(Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  int k = 0;
  double prod = rng.uniform01();
  while (prod > limit) {
    prod *= rng.uniform01();
    ++k;
  }
  return k;
}

}  // namespace

int poisson_count(Rng& rng, double mean) {
  if (!(mean >= 0.0)) throw UsageError("poisson_count: mean must be >= 0");
  int total = 0;
  while (mean > 30.0) {
    total += poisson_inversion(rng, 30.0);
    mean -= 30.0;
  }
  return total + poisson_inversion(rng, mean);
}

PointSet sample_poisson(Rng& rng, double intensity, int dim) {
  const int n = poisson_count(rng, intensity);
  return sample_uniform(rng, n, dim);
}

// ---------------------------------------------------------------------------
// Block densities
// ---------------------------------------------------------------------------

namespace {

int checked_cells(int m, int dim) {
  if (m < 1) throw UsageError("BlockDensity: level must be >= 1");
  if (dim < 1) throw UsageError("BlockDensity: dimension must be >= 1");
  long long cells = 1;
  for (int k = 0; k < dim; ++k) {
    cells *= m;
    if (cells > (1 << 26)) throw UsageError("BlockDensity: too many cells");
  }
  return static_cast<int>(cells);
}

}  // namespace

BlockDensity::BlockDensity(int m_, int dim_, std::vector<double> w)
    : m(m_), dim(dim_), weights(std::move(w)) {
  const int cells = checked_cells(m, dim);
  if (static_cast<int>(weights.size()) != cells)
    throw UsageError("BlockDensity: expected m^d weights");
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw UsageError("BlockDensity: weights must be >= 0");
    sum += v;
  }
  const double total = sum * std::pow(static_cast<double>(m), -dim);
  if (std::abs(total - 1.0) > 1e-9)
    throw UsageError("BlockDensity: weights do not integrate to 1");
}

double BlockDensity::cell_prob(int i) const {
  return weights[i] * std::pow(static_cast<double>(m), -dim);
}

double BlockDensity::value_at(const double* x) const {
  return weights[cell_index(x, unit_box(dim), m)];
}

PointSet sample_block(Rng& rng, int n, const BlockDensity& density) {
  if (n < 0) throw UsageError("sample_block: n must be >= 0");
  const int cells = density.cells();
  std::vector<double> cum(cells);
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    acc += density.cell_prob(i);
    cum[i] = acc;
  }
  cum[cells - 1] = 1.0;  // guard against rounding in the final bin

  const int d = density.dim;
  PointSet out(d);
  out.coords.reserve(static_cast<size_t>(n) * d);
  const double inv_m = 1.0 / density.m;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    int cell = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    cell = std::min(cell, cells - 1);
    // decompose row-major index, first coordinate slowest
    int rem = cell;
    std::vector<int> digit(d);
    for (int k = d - 1; k >= 0; --k) {
      digit[k] = rem % density.m;
      rem /= density.m;
    }
    for (int k = 0; k < d; ++k) out.coords.push_back((digit[k] + rng.uniform01()) * inv_m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The affine family
// ---------------------------------------------------------------------------

HolderDensity::HolderDensity(double a_, int dim_) : a(a_), dim(dim_) {
  if (!(std::abs(a) <= 2.0)) throw UsageError("HolderDensity: |a| must be <= 2");
  if (dim < 1) throw UsageError("HolderDensity: dimension must be >= 1");
}

PointSet sample_holder(Rng& rng, int n, const HolderDensity& density) {
  if (n < 0) throw UsageError("sample_holder: n must be >= 0");
  const int d = density.dim;
  const double a = density.a;
  PointSet out(d);
  out.coords.reserve(static_cast<size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    // first coordinate by CDF inversion: F(t) = t + (a/2) t (t - 1)
    const double u = rng.uniform01();
    double x1;
    if (std::abs(a) < 1e-15 || u == 0.0) {
      x1 = u;
    } else {
      const double h = 0.5 * a;
      // h t^2 + (1 - h) t - u = 0, root in [0,1]
      const double b = 1.0 - h;
      const double disc = b * b + 4.0 * h * u;
      x1 = 2.0 * u / (b + std::sqrt(std::max(disc, 0.0)));
    }
    out.coords.push_back(std::clamp(x1, 0.0, 1.0));
    for (int k = 1; k < d; ++k) out.coords.push_back(rng.uniform01());
  }
  return out;
}

BlockDensity approximate_block(const HolderDensity& density, int m) {
  const int cells = checked_cells(m, density.dim);
  std::vector<double> w(cells);
  // cell average of 1 + a (x1 - 1/2) is 1 + a (mid - 1/2) with mid the cell
  // midpoint along the first axis
  const int stride = cells / m;  // first coordinate slowest
  for (int i = 0; i < cells; ++i) {
    const int i1 = i / stride;
    const double mid = (i1 + 0.5) / m;
    w[i] = 1.0 + density.a * (mid - 0.5);
  }
  return BlockDensity(m, density.dim, std::move(w));
}

namespace {

// 8-point Gauss-Legendre on [0,1]
constexpr int kGaussN = 8;
constexpr double kGaussX[kGaussN] = {
    0.01985507175123188, 0.10166676129318664, 0.2372337950418355, 0.40828267875217505,
    0.59171732124782495, 0.7627662049581645,  0.89833323870681336, 0.98014492824876812};
constexpr double kGaussW[kGaussN] = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894364, 0.18134189168918099,
    0.18134189168918099, 0.15685332293894364, 0.11119051722668724, 0.05061426814518813};

void gauss_cell_recurse(const std::function<double(const double*)>& f, const Box& cell,
                        int k, double* x, double wacc, double* sum) {
  if (k == cell.dim()) {
    *sum += wacc * f(x);
    return;
  }
  for (int i = 0; i < kGaussN; ++i) {
    x[k] = cell.lo(k) + kGaussX[i] * cell.side;
    gauss_cell_recurse(f, cell, k + 1, x, wacc * kGaussW[i], sum);
  }
}

double gauss_cell_mean(const std::function<double(const double*)>& f, const Box& cell) {
  std::vector<double> x(cell.dim());
  double sum = 0.0;
  gauss_cell_recurse(f, cell, 0, x.data(), 1.0, &sum);
  return sum;
}

}  // namespace

BlockDensity approximate_block_quadrature(const std::function<double(const double*)>& f,
                                          int dim, int m) {
  const int cells = checked_cells(m, dim);
  std::vector<double> w(cells);
  const Box box = unit_box(dim);
  for (int i = 0; i < cells; ++i) w[i] = gauss_cell_mean(f, cell_box(box, m, i));
  return BlockDensity(m, dim, std::move(w));
}

double l1_gap(const HolderDensity& density, const BlockDensity& approx) {
  if (approx.dim != density.dim) throw UsageError("l1_gap: dimension mismatch");
  const int m = approx.m;
  const int cells = approx.cells();
  const int stride = cells / m;
  const double a = density.a;
  const double cell_vol = std::pow(static_cast<double>(m), -density.dim);
  // Inside each cell f - phi = a x1 + (1 - a/2 - phi_i) is affine in x1;
  // integrate |linear| over the x1 range of the cell in closed form.
  auto seg = [](double c0, double c1, double lo, double hi) {
    // integral over [lo,hi] of |c0 + c1 t| dt
    auto prim = [&](double t) { return c0 * t + 0.5 * c1 * t * t; };
    if (std::abs(c1) < 1e-300) return std::abs(c0) * (hi - lo);
    const double root = -c0 / c1;
    if (root <= lo || root >= hi) return std::abs(prim(hi) - prim(lo));
    return std::abs(prim(root) - prim(lo)) + std::abs(prim(hi) - prim(root));
  };
  double total = 0.0;
  for (int i = 0; i < cells; ++i) {
    const int i1 = i / stride;
    const double lo = static_cast<double>(i1) / m;
    const double hi = static_cast<double>(i1 + 1) / m;
    const double c0 = 1.0 - 0.5 * a - approx.weights[i];
    // the x1 integral carries weight m^-(d-1) from the other coordinates
    total += seg(c0, a, lo, hi) * cell_vol * m;
  }
  return total;
}

double density_power_integral(const BlockDensity& density, double q) {
  double sum = 0.0;
  for (int i = 0; i < density.cells(); ++i)
    sum += std::pow(density.weights[i], q) * std::pow(static_cast<double>(density.m), -density.dim);
  return sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  struct Helper {
    const std::function<double(double)>& f;
    double simpson(double a, double b, double fa, double fm, double fb) const {
      return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    double rec(double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = simpson(a, m, fa, flm, fm);
      const double right = simpson(m, b, fm, frm, fb);
      if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return rec(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             rec(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  } h{f};
  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  return h.rec(lo, hi, fa, fm, fb, h.simpson(lo, hi, fa, fm, fb), tol, 0);
}

double density_power_integral(const HolderDensity& density, double q) {
  const double a = density.a;
  if (std::abs(a) < 1e-15) return 1.0;
  auto f = [a, q](double t) { return std::pow(1.0 + a * (t - 0.5), q); };
  return integrate_adaptive(f, 0.0, 1.0, 1e-12);
}

}  // namespace pwe
