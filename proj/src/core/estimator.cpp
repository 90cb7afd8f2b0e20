#include "core/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/common.hpp"

namespace pwe {

namespace {

double neumaier_sum(const std::vector<double>& xs) {
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      comp += (s - t) + x;
    else
      comp += (x - t) + s;
    s = t;
  }
  return s + comp;
}

// Solves A x = b (k x k, symmetric positive definite in our use) and returns
// the inverse as well; Gauss-Jordan with partial pivoting.
bool solve_with_inverse(std::vector<double> a, std::vector<double> b, int k,
                        std::vector<double>& x, std::vector<double>& inv) {
  inv.assign(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) inv[static_cast<size_t>(i) * k + i] = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[static_cast<size_t>(r) * k + col]) >
          std::abs(a[static_cast<size_t>(piv) * k + col]))
        piv = r;
    if (std::abs(a[static_cast<size_t>(piv) * k + col]) < 1e-300) return false;
    for (int c = 0; c < k; ++c) {
      std::swap(a[static_cast<size_t>(col) * k + c], a[static_cast<size_t>(piv) * k + c]);
      std::swap(inv[static_cast<size_t>(col) * k + c],
                inv[static_cast<size_t>(piv) * k + c]);
    }
    std::swap(b[col], b[piv]);
    const double d = a[static_cast<size_t>(col) * k + col];
    for (int c = 0; c < k; ++c) {
      a[static_cast<size_t>(col) * k + c] /= d;
      inv[static_cast<size_t>(col) * k + c] /= d;
    }
    b[col] /= d;
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double m = a[static_cast<size_t>(r) * k + col];
      if (m == 0.0) continue;
      for (int c = 0; c < k; ++c) {
        a[static_cast<size_t>(r) * k + c] -= m * a[static_cast<size_t>(col) * k + c];
        inv[static_cast<size_t>(r) * k + c] -= m * inv[static_cast<size_t>(col) * k + c];
      }
      b[r] -= m * b[col];
    }
  }
  x = b;
  return true;
}

const char* sampler_kind_name(SamplerSpec::Kind k) {
  switch (k) {
    case SamplerSpec::Kind::Uniform: return "uniform";
    case SamplerSpec::Kind::Poisson: return "poisson";
    case SamplerSpec::Kind::Block: return "block";
    case SamplerSpec::Kind::Holder: return "holder";
  }
  return "uniform";
}

}  // namespace

std::string SamplerSpec::label() const {
  switch (kind) {
    case Kind::Uniform:
    case Kind::Poisson:
      return sampler_kind_name(kind);
    case Kind::Block:
      return "block_m" + std::to_string(block.m);
    case Kind::Holder:
      return "holder_a" + format_double(holder.a);
  }
  return "uniform";
}

PointSet SamplerSpec::draw(Rng& rng, long n, int dim) const {
  switch (kind) {
    case Kind::Uniform:
      return sample_uniform(rng, static_cast<int>(n), dim);
    case Kind::Poisson:
      return sample_poisson(rng, static_cast<double>(n), dim);
    case Kind::Block:
      if (block.dim != dim) throw UsageError("sampler: block density dimension mismatch");
      return sample_block(rng, static_cast<int>(n), block);
    case Kind::Holder:
      if (holder.dim != dim) throw UsageError("sampler: density dimension mismatch");
      return sample_holder(rng, static_cast<int>(n), holder);
  }
  throw UsageError("sampler: unknown kind");
}

double rate_exponent(int d, double p) {
  if (d < 1 || !(p > 0.0) || !(p < d))
    throw UsageError("rate exponent needs 0 < p < d");
  return (d - p) / d;
}

Estimate mc_mean(const EstimateSpec& spec, long n, long trials, SeedSpec seed,
                 int threads) {
  if (trials < 2) throw UsageError("mc_mean: need at least 2 trials");
  if (n < 0) throw UsageError("mc_mean: n must be >= 0");
  std::vector<double> slots(trials);

  auto run_range = [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      Rng rng = make_stream(seed, static_cast<uint64_t>(n), static_cast<uint64_t>(t));
      Instance inst;
      inst.points = spec.sampler.draw(rng, n, spec.dim);
      inst.box = unit_box(spec.dim);
      inst.p = spec.p;
      inst.functional = spec.functional;
      inst.variant = spec.variant;
      inst.mode = spec.mode;
      inst.factor = spec.factor;
      inst.limits = spec.limits;
      slots[t] = solve(inst).value;
    }
  };

  const int nthreads = static_cast<int>(std::max<long>(1, std::min<long>(threads, trials)));
  if (nthreads == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    const long chunk = (trials + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
      const long lo = w * chunk;
      const long hi = std::min(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        try {
          run_range(lo, hi);
        } catch (...) {
          std::lock_guard<std::mutex> g(err_mu);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  const double mean = neumaier_sum(slots) / static_cast<double>(trials);
  std::vector<double> sq(trials);
  for (long t = 0; t < trials; ++t) sq[t] = (slots[t] - mean) * (slots[t] - mean);
  const double var = neumaier_sum(sq) / static_cast<double>(trials - 1);
  Estimate e;
  e.functional = spec.functional;
  e.variant = spec.variant;
  e.dim = spec.dim;
  e.p = spec.p;
  e.sampler = spec.sampler.label();
  e.n = n;
  e.trials = trials;
  e.mean = mean;
  e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  e.seed = seed.experiment_seed;
  return e;
}

RateFit fit_alpha(const std::vector<Estimate>& series, int d, double p) {
  if (series.size() < 4) throw ConfigError("fit_alpha: need at least 4 grid points");
  for (size_t i = 1; i < series.size(); ++i)
    if (series[i].n <= series[i - 1].n)
      throw ConfigError("fit_alpha: n grid must be strictly increasing");
  const double nu = rate_exponent(d, p);

  RateFit fit;
  const bool power_correction = p < d - 1;
  const bool log_correction = p == d - 1 && p != 1.0;
  const int k = (power_correction || log_correction) ? 3 : 2;
  fit.model = power_correction ? "alpha_plus_correction"
                               : (log_correction ? "power_with_log" : "pure_power");

  std::vector<double> xtx(static_cast<size_t>(k) * k, 0.0);
  std::vector<double> xty(k, 0.0);
  auto regressors = [&](const Estimate& e, double* row) {
    const double nn = static_cast<double>(e.n);
    row[0] = std::pow(nn, nu);
    if (power_correction)
      row[1] = std::pow(nn, (d - 1 - p) / d);
    else if (log_correction)
      row[1] = std::max(std::log(nn), 1.0);
    row[k - 1] = 1.0;
  };
  for (const Estimate& e : series) {
    double row[3] = {0, 0, 0};
    regressors(e, row);
    const double se = std::max(e.std_error, 1e-12);
    const double w = 1.0 / (se * se);
    for (int i = 0; i < k; ++i) {
      xty[i] += w * row[i] * e.mean;
      for (int j = 0; j < k; ++j) xtx[static_cast<size_t>(i) * k + j] += w * row[i] * row[j];
    }
  }
  std::vector<double> beta, inv;
  if (!solve_with_inverse(xtx, xty, k, beta, inv))
    throw ConfigError("fit_alpha: singular design (grid too narrow)");

  fit.alpha_hat = beta[0];
  fit.alpha_se = std::sqrt(std::max(inv[0], 0.0));
  fit.c_hat = beta[1];  // correction coefficient, or the constant when k = 2
  fit.exponent_hat = nu;
  double rss = 0.0;
  for (const Estimate& e : series) {
    double row[3] = {0, 0, 0};
    regressors(e, row);
    double yhat = 0.0;
    for (int i = 0; i < k; ++i) yhat += beta[i] * row[i];
    rss += (e.mean - yhat) * (e.mean - yhat);
    fit.n_grid.push_back(e.n);
  }
  fit.residual_rms = std::sqrt(rss / static_cast<double>(series.size()));
  return fit;
}

namespace {

RateFit log_slope_core(const std::vector<GapPoint>& pts, const std::string& model) {
  RateFit fit;
  fit.model = model;
  std::vector<double> lx, ly;
  for (const GapPoint& g : pts) {
    const double r = std::abs(g.mean);
    if (r > 0.0 && r >= 3.0 * g.std_error && g.n >= 2) {
      lx.push_back(std::log(static_cast<double>(g.n)));
      ly.push_back(std::log(r));
      fit.n_grid.push_back(g.n);
    } else {
      fit.excluded.push_back(g.n);
    }
  }
  if (lx.size() < 3) {
    fit.status = "inconclusive: fewer than 3 points above the noise floor";
    return fit;
  }
  const int m = static_cast<int>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double det = m * sxx - sx * sx;
  if (std::abs(det) < 1e-12) {
    fit.status = "inconclusive: degenerate grid";
    return fit;
  }
  const double slope = (m * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / m;
  fit.exponent_hat = slope;
  fit.c_hat = std::exp(intercept);
  double rss = 0.0;
  for (int i = 0; i < m; ++i) {
    const double e = ly[i] - (intercept + slope * lx[i]);
    rss += e * e;
  }
  fit.residual_rms = std::sqrt(rss / m);
  return fit;
}

}  // namespace

RateFit residual_rate(const std::vector<Estimate>& series, double alpha_hat, int d,
                      double p) {
  const double nu = rate_exponent(d, p);
  std::vector<GapPoint> pts;
  for (const Estimate& e : series) {
    GapPoint g;
    g.n = e.n;
    g.mean = e.mean - alpha_hat * std::pow(static_cast<double>(e.n), nu);
    g.std_error = e.std_error;
    g.trials = e.trials;
    pts.push_back(g);
  }
  RateFit fit = log_slope_core(pts, "pure_power");
  fit.alpha_hat = alpha_hat;
  return fit;
}

RateFit fit_log_slope(const GapSeries& series) {
  return log_slope_core(series.points, "pure_power");
}

std::string csv_header() {
  return "functional,variant,d,p,sampler,n,trials,mean,stderr,seed";
}

std::string csv_row(const Estimate& e) {
  std::ostringstream out;
  out << to_string(e.functional) << ',' << to_string(e.variant) << ',' << e.dim << ','
      << format_double(e.p) << ',' << e.sampler << ',' << e.n << ',' << e.trials << ','
      << format_double(e.mean) << ',' << format_double(e.std_error) << ',' << e.seed;
  return out.str();
}

std::string format_rate_fit(const RateFit& fit, const std::string& title) {
  std::ostringstream out;
  out << "fit " << title << "\n";
  out << "model = " << fit.model << "\n";
  out << "alpha_hat = " << format_double(fit.alpha_hat) << "\n";
  out << "alpha_se = " << format_double(fit.alpha_se) << "\n";
  out << "c_hat = " << format_double(fit.c_hat) << "\n";
  out << "exponent_hat = " << format_double(fit.exponent_hat) << "\n";
  out << "residual_rms = " << format_double(fit.residual_rms) << "\n";
  out << "n_grid =";
  for (long n : fit.n_grid) out << ' ' << n;
  out << "\n";
  if (!fit.excluded.empty()) {
    out << "excluded =";
    for (long n : fit.excluded) out << ' ' << n;
    out << "\n";
  }
  out << "status = " << fit.status << "\n";
  return out.str();
}

}  // namespace pwe
