#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/common.hpp"
#include "core/dual.hpp"

namespace pwe {

namespace {

constexpr double kTol = 1e-9;

void parallel_trials(long trials, int threads, const std::function<void(long)>& body) {
  const int nthreads = static_cast<int>(std::max<long>(1, std::min<long>(threads, trials)));
  if (nthreads == 1) {
    for (long t = 0; t < trials; ++t) body(t);
    return;
  }
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
        for (long t = lo; t < hi; ++t) body(t);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double ordered_sum(const std::vector<double>& xs) {
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

GapPoint reduce_slots(long n, const std::vector<double>& slots) {
  const long trials = static_cast<long>(slots.size());
  GapPoint g;
  g.n = n;
  g.trials = trials;
  g.mean = ordered_sum(slots) / static_cast<double>(trials);
  std::vector<double> sq(slots.size());
  for (size_t t = 0; t < slots.size(); ++t) sq[t] = (slots[t] - g.mean) * (slots[t] - g.mean);
  const double var = ordered_sum(sq) / static_cast<double>(std::max<long>(trials - 1, 1));
  g.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  return g;
}

Instance make_instance(Functional f, Variant variant, const PointSet& ps, int dim, double p) {
  Instance inst;
  inst.points = ps;
  inst.box = unit_box(dim);
  inst.p = p;
  inst.functional = f;
  inst.variant = variant;
  return inst;
}

// 3x3 symmetric solve with inverse diagonal entry for the intercept variance.
bool solve3(const double a[9], const double b[3], double x[3], double* inv00) {
  double m[9];
  std::copy(a, a + 9, m);
  const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                     m[1] * (m[3] * m[8] - m[5] * m[6]) +
                     m[2] * (m[3] * m[7] - m[4] * m[6]);
  if (!(std::abs(det) > 1e-200)) return false;
  const double c00 = (m[4] * m[8] - m[5] * m[7]) / det;
  const double c01 = (m[2] * m[7] - m[1] * m[8]) / det;
  const double c02 = (m[1] * m[5] - m[2] * m[4]) / det;
  const double c10 = (m[5] * m[6] - m[3] * m[8]) / det;
  const double c11 = (m[0] * m[8] - m[2] * m[6]) / det;
  const double c12 = (m[2] * m[3] - m[0] * m[5]) / det;
  const double c20 = (m[3] * m[7] - m[4] * m[6]) / det;
  const double c21 = (m[1] * m[6] - m[0] * m[7]) / det;
  const double c22 = (m[0] * m[4] - m[1] * m[3]) / det;
  x[0] = c00 * b[0] + c01 * b[1] + c02 * b[2];
  x[1] = c10 * b[0] + c11 * b[1] + c12 * b[2];
  x[2] = c20 * b[0] + c21 * b[1] + c22 * b[2];
  *inv00 = c00;
  return true;
}

}  // namespace

GapSeries closeness_gap(Functional f, int dim, double p, const std::vector<long>& n_grid,
                        long trials, SeedSpec seed, int threads) {
  if (trials < 2) throw UsageError("closeness_gap: need at least 2 trials");
  GapSeries series;
  series.name = "closeness";
  for (long n : n_grid) {
    std::vector<double> slots(trials);
    parallel_trials(trials, threads, [&](long t) {
      Rng rng = make_stream(seed, static_cast<uint64_t>(n), static_cast<uint64_t>(t));
      const PointSet ps = sample_uniform(rng, static_cast<int>(n), dim);
      const double plain = solve(make_instance(f, Variant::Plain, ps, dim, p)).value;
      const double dual = solve(make_instance(f, Variant::Dual, ps, dim, p)).value;
      const double gap = plain - dual;
      if (gap < -kTol * (1.0 + std::abs(plain)))
        throw InternalError("closeness_gap: domination violated at n=" + std::to_string(n) +
                            " trial=" + std::to_string(t));
      slots[t] = gap;
    });
    series.points.push_back(reduce_slots(n, slots));
  }
  return series;
}

GapSeries add_k_gap(Functional f, int dim, double p, long n, const std::vector<long>& k_list,
                    long trials, SeedSpec seed, int threads) {
  if (trials < 2) throw UsageError("add_k_gap: need at least 2 trials");
  long max_k = 0;
  for (long k : k_list) {
    if (k < 0 || k > n / 2) throw UsageError("add_k_gap: k must lie in [0, n/2]");
    max_k = std::max(max_k, k);
  }
  std::vector<std::vector<double>> slots(k_list.size(), std::vector<double>(trials));
  parallel_trials(trials, threads, [&](long t) {
    Rng rng = make_stream(seed, static_cast<uint64_t>(n), static_cast<uint64_t>(t));
    const PointSet full = sample_uniform(rng, static_cast<int>(n + max_k), dim);
    const double base = solve(make_instance(f, Variant::Plain, full.prefix(n), dim, p)).value;
    for (size_t i = 0; i < k_list.size(); ++i) {
      const long k = k_list[i];
      const double ext =
          k == 0 ? base
                 : solve(make_instance(f, Variant::Plain, full.prefix(n + k), dim, p)).value;
      slots[i][t] = ext - base;
    }
  });
  GapSeries series;
  series.name = "add_k";
  for (size_t i = 0; i < k_list.size(); ++i)
    series.points.push_back(reduce_slots(k_list[i], slots[i]));
  return series;
}

GapSeries poissonization_gap(Functional f, int dim, double p,
                             const std::vector<long>& n_grid,
                             const std::vector<long>& trials_per_n, SeedSpec seed,
                             int threads) {
  if (trials_per_n.size() != n_grid.size())
    throw UsageError("poissonization_gap: one trial count per grid point");
  GapSeries series;
  series.name = "poissonization";
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    const long n = n_grid[gi];
    const long trials = trials_per_n[gi];
    if (trials < 8) throw UsageError("poissonization_gap: need at least 8 trials");
    std::vector<double> y(trials), z1(trials), z2(trials);
    parallel_trials(trials, threads, [&](long t) {
      Rng rng = make_stream(seed, static_cast<uint64_t>(n), static_cast<uint64_t>(t));
      const int pois_n = poisson_count(rng, static_cast<double>(n));
      const long total = std::max<long>(pois_n, n);
      const PointSet full = sample_uniform(rng, static_cast<int>(total), dim);
      const double base = solve(make_instance(f, Variant::Plain, full.prefix(n), dim, p)).value;
      const double pois =
          pois_n == n
              ? base
              : solve(make_instance(f, Variant::Plain, full.prefix(pois_n), dim, p)).value;
      y[t] = pois - base;
      z1[t] = static_cast<double>(pois_n) - static_cast<double>(n);
      z2[t] = z1[t] * z1[t] - static_cast<double>(n);
    });

    // Control-variate estimate of E[y]: both covariates have exact mean zero
    // under Poisson(n), so the regression intercept keeps the mean while the
    // count fluctuation leaves the error term.
    double xtx[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    double xty[3] = {0, 0, 0};
    for (long t = 0; t < trials; ++t) {
      const double row[3] = {1.0, z1[t], z2[t]};
      for (int i = 0; i < 3; ++i) {
        xty[i] += row[i] * y[t];
        for (int j = 0; j < 3; ++j) xtx[i * 3 + j] += row[i] * row[j];
      }
    }
    double beta[3], inv00 = 0.0;
    GapPoint g;
    if (solve3(xtx, xty, beta, &inv00)) {
      double rss = 0.0;
      for (long t = 0; t < trials; ++t) {
        const double e = y[t] - (beta[0] + beta[1] * z1[t] + beta[2] * z2[t]);
        rss += e * e;
      }
      const double s2 = rss / static_cast<double>(trials - 3);
      g.n = n;
      g.trials = trials;
      g.mean = beta[0];
      g.std_error = std::sqrt(std::max(s2 * inv00, 0.0));
    } else {
      g = reduce_slots(n, y);  // degenerate counts; plain paired mean
    }
    series.points.push_back(g);
  }
  return series;
}

BoundarySeries boundary_growth(int dim, double p, const std::vector<long>& n_grid,
                               long trials, SeedSpec seed, int threads) {
  if (trials < 2) throw UsageError("boundary_growth: need at least 2 trials");
  BoundarySeries out;
  out.nb.name = "boundary_count";
  out.lb.name = "boundary_cost";
  for (long n : n_grid) {
    std::vector<double> nb(trials), lb(trials);
    parallel_trials(trials, threads, [&](long t) {
      Rng rng = make_stream(seed, static_cast<uint64_t>(n), static_cast<uint64_t>(t));
      const PointSet ps = sample_uniform(rng, static_cast<int>(n), dim);
      const Solution sol = solve(make_instance(Functional::MST, Variant::Dual, ps, dim, p));
      nb[t] = sol.boundary_degree;
      lb[t] = sol.boundary_cost;
    });
    out.nb.points.push_back(reduce_slots(n, nb));
    out.lb.points.push_back(reduce_slots(n, lb));
  }
  return out;
}

namespace {

NonuniformResult nonuniform_core(Functional f, const SamplerSpec& fixed_sampler,
                                 const HolderDensity* holder, double p,
                                 const std::vector<long>& n_grid, long trials,
                                 double alpha_hat, double alpha_se, SeedSpec seed,
                                 int threads, int dim, double integral) {
  NonuniformResult res;
  res.integral = integral;
  res.gaps.name = "nonuniform_gap";
  for (long n : n_grid) {
    EstimateSpec spec;
    spec.functional = f;
    spec.dim = dim;
    spec.p = p;
    if (holder) {
      spec.sampler.kind = SamplerSpec::Kind::Block;
      spec.sampler.block =
          approximate_block(*holder, static_cast<int>(holder_block_m(n, holder->beta(), dim, p)));
    } else {
      spec.sampler = fixed_sampler;
    }
    const Estimate est = mc_mean(spec, n, trials, seed, threads);
    res.estimates.push_back(est);
    const double nnu = std::pow(static_cast<double>(n), rate_exponent(dim, p));
    GapPoint g;
    g.n = n;
    g.trials = trials;
    g.mean = std::abs(est.mean / nnu - alpha_hat * integral);
    g.std_error = std::sqrt((est.std_error / nnu) * (est.std_error / nnu) +
                            (alpha_se * integral) * (alpha_se * integral));
    res.gaps.points.push_back(g);
  }
  res.slope = fit_log_slope(res.gaps);
  return res;
}

}  // namespace

NonuniformResult block_density_experiment(Functional f, const BlockDensity& density,
                                          double p, const std::vector<long>& n_grid,
                                          long trials, double alpha_hat, double alpha_se,
                                          SeedSpec seed, int threads) {
  SamplerSpec sampler;
  sampler.kind = SamplerSpec::Kind::Block;
  sampler.block = density;
  const double integral =
      density_power_integral(density, rate_exponent(density.dim, p));
  return nonuniform_core(f, sampler, nullptr, p, n_grid, trials, alpha_hat, alpha_se, seed,
                         threads, density.dim, integral);
}

NonuniformResult holder_density_experiment(Functional f, const HolderDensity& density,
                                           double p, const std::vector<long>& n_grid,
                                           long trials, double alpha_hat, double alpha_se,
                                           SeedSpec seed, int threads) {
  const double integral =
      density_power_integral(density, rate_exponent(density.dim, p));
  return nonuniform_core(f, SamplerSpec{}, &density, p, n_grid, trials, alpha_hat, alpha_se,
                         seed, threads, density.dim, integral);
}

long holder_block_m(long n, double beta, int d, double p) {
  if (n < 1) throw UsageError("holder_block_m: n must be >= 1");
  const double expo = 1.0 / (beta * (d - p) + d);
  return std::max(1L, std::lround(std::pow(static_cast<double>(n), expo)));
}

std::vector<DensityApproxRow> density_approx_table(const std::vector<double>& a_list,
                                                   const std::vector<int>& m_list, int dim,
                                                   double k_override) {
  std::vector<DensityApproxRow> rows;
  for (double a : a_list) {
    const HolderDensity h(a, dim);
    for (int m : m_list) {
      DensityApproxRow row;
      row.a = a;
      row.m = m;
      row.gap = l1_gap(h, approximate_block(h, m));
      const double k = k_override > 0.0 ? k_override : h.holder_constant();
      row.bound = std::pow(static_cast<double>(dim), 0.5 * h.beta()) * k *
                  std::pow(static_cast<double>(m), -h.beta());
      row.ok = row.gap <= row.bound + 1e-12;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_density_approx(const std::vector<DensityApproxRow>& rows) {
  std::ostringstream out;
  out << "a m gap bound ok\n";
  for (const DensityApproxRow& r : rows)
    out << format_double(r.a) << ' ' << r.m << ' ' << format_double(r.gap) << ' '
        << format_double(r.bound) << ' ' << (r.ok ? "yes" : "NO") << "\n";
  return out.str();
}

std::string render_loglog_svg(const GapSeries& series, const RateFit& fit,
                              const std::string& title) {
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  std::vector<std::pair<double, double>> pts;
  for (const GapPoint& g : series.points)
    if (g.n >= 1 && std::abs(g.mean) > 0.0)
      pts.emplace_back(std::log10(static_cast<double>(g.n)), std::log10(std::abs(g.mean)));
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  if (pts.size() < 2) {
    out << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" font-size=\"14\">not enough points</text>\n</svg>\n";
    return out.str();
  }
  double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
  for (auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  if (y1 - y0 < 1e-9) y1 = y0 + 1;
  const double padx = 0.05 * (x1 - x0), pady = 0.1 * (y1 - y0);
  x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto sy = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(std::ceil(x0)); e <= static_cast<int>(std::floor(x1)); ++e) {
    out << "<line x1=\"" << sx(e) << "\" y1=\"" << H - mb << "\" x2=\"" << sx(e) << "\" y2=\""
        << H - mb + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(e) << "\" y=\"" << H - mb + 22
        << "\" text-anchor=\"middle\" font-size=\"12\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(y0)); e <= static_cast<int>(std::floor(y1)); ++e) {
    out << "<line x1=\"" << ml - 6 << "\" y1=\"" << sy(e) << "\" x2=\"" << ml << "\" y2=\""
        << sy(e) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 10 << "\" y=\"" << sy(e) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">1e" << e << "</text>\n";
  }
  out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">n</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\" text-anchor=\"middle\">"
      << series.name << "</text>\n";
  if (fit.ok() && fit.c_hat > 0.0) {
    const double lx0 = x0 + padx, lx1 = x1 - padx;
    const double ly0 = std::log10(fit.c_hat) + fit.exponent_hat * lx0;
    const double ly1 = std::log10(fit.c_hat) + fit.exponent_hat * lx1;
    out << "<line x1=\"" << sx(lx0) << "\" y1=\"" << sy(ly0) << "\" x2=\"" << sx(lx1)
        << "\" y2=\"" << sy(ly1) << "\" stroke=\"#c33\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 18
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#c33\">slope "
        << format_double(fit.exponent_hat) << "</text>\n";
  }
  for (auto& [x, y] : pts)
    out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y)
        << "\" r=\"3.5\" fill=\"#226\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string summarize_csv(const std::vector<std::string>& csv_texts) {
  struct Group {
    long rows = 0;
    long n_min = 0, n_max = 0;
    long trials = 0;
    double mean_at_max = 0.0;
    double norm_at_max = 0.0;
  };
  std::map<std::string, Group> groups;
  const std::string header = csv_header();
  for (const std::string& text : csv_texts) {
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first) {
        first = false;
        if (line == header) continue;
      }
      std::vector<std::string> cols;
      std::istringstream ls(line);
      std::string col;
      while (std::getline(ls, col, ',')) cols.push_back(col);
      if (cols.size() != 10) throw ConfigError("summary: malformed CSV row: " + line);
      const std::string key =
          cols[0] + "," + cols[1] + ",d=" + cols[2] + ",p=" + cols[3] + "," + cols[4];
      const long n = std::stol(cols[5]);
      const long trials = std::stol(cols[6]);
      const double mean = std::stod(cols[7]);
      const int d = std::stoi(cols[2]);
      const double p = std::stod(cols[3]);
      Group& g = groups[key];
      if (g.rows == 0 || n < g.n_min) g.n_min = n;
      if (g.rows == 0 || n > g.n_max) {
        g.n_max = n;
        g.mean_at_max = mean;
        g.norm_at_max =
            p < d ? mean / std::pow(static_cast<double>(std::max(n, 1L)),
                                    (d - p) / static_cast<double>(d))
                  : mean;
      }
      ++g.rows;
      g.trials += trials;
    }
  }
  std::ostringstream out;
  out << "group rows n_range trials mean_at_max_n normalized\n";
  for (const auto& [key, g] : groups) {
    out << key << ' ' << g.rows << ' ' << g.n_min << ".." << g.n_max << ' ' << g.trials << ' '
        << format_double(g.mean_at_max) << ' ' << format_double(g.norm_at_max) << "\n";
  }
  return out.str();
}

}  // namespace pwe
