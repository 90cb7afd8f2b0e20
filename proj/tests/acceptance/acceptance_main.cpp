// Acceptance gate: one self-contained check per shipped guarantee, each
// printing a single PASS/FAIL line. Exit code 0 only when every executed
// criterion passes. --criterion N runs one of them in isolation.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "core/axioms.hpp"
#include "core/driver.hpp"
#include "core/dual.hpp"
#include "core/estimator.hpp"
#include "core/experiments.hpp"
#include "core/sampling.hpp"
#include "core/solvers.hpp"
#include "oracles.hpp"

using namespace pwe;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) { return format_double(v); }

int draw_size(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(hi - lo + 1));
}

constexpr double kOracleTol = 1e-9;

// --- criterion 1: exact solvers match brute-force enumeration --------------

Outcome criterion_oracle_equivalence() {
  Stopwatch watch;
  Rng rng = make_stream(SeedSpec{1001}, 0, 0);
  const Box box = unit_box(2);
  const double p_cycle[3] = {0.5, 1.0, 1.5};
  const BoundaryFactor factor_cycle[3] = {BoundaryFactor::Auto, BoundaryFactor::Full,
                                          BoundaryFactor::Half};
  double worst = 0.0;
  auto agree = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    return std::abs(got - want) <= kOracleTol;
  };

  for (int i = 0; i < 200; ++i) {
    const double p = p_cycle[i % 3];
    const double factor = effective_factor(p, factor_cycle[i % 3]);
    {
      const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 7), 2);
      if (!agree(solve_mst(ps, box, p).value, oracle::mst_value(ps, p)))
        return {false, "tree value disagrees with enumeration at instance " +
                           std::to_string(i)};
    }
    {
      const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 10), 2);
      if (!agree(solve_mm_exact(ps, box, p, 512).value, oracle::mm_value(ps, p)))
        return {false, "matching value disagrees with enumeration at instance " +
                           std::to_string(i)};
    }
    {
      const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 8), 2);
      if (!agree(solve_tsp_exact(ps, box, p, 16).value, oracle::tsp_value(ps, p)))
        return {false, "tour value disagrees with enumeration at instance " +
                           std::to_string(i)};
    }
    {
      const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 7), 2);
      if (!agree(solve_mst_dual(ps, box, p, factor).value,
                 oracle::mst_star_value(ps, box, p, factor)))
        return {false, "tree dual disagrees with enumeration at instance " +
                           std::to_string(i)};
    }
    {
      const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 7), 2);
      if (!agree(solve_mm_dual(ps, box, p, factor, 512).value,
                 oracle::mm_star_value(ps, box, p, factor)))
        return {false, "matching dual disagrees with enumeration at instance " +
                           std::to_string(i)};
    }
    {
      const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 7), 2);
      if (!agree(solve_tsp_dual(ps, box, p, factor, 12, 16).value,
                 oracle::tsp_star_value(ps, box, p, factor)))
        return {false, "tour dual disagrees with enumeration at instance " +
                           std::to_string(i)};
    }
  }
  const double secs = watch.seconds();
  std::ostringstream d;
  d << "6 solvers x 200 instances agree to 1e-9 (max deviation " << fmt(worst) << "), "
    << fmt(secs) << "s";
  if (secs >= 120.0) {
    d << " >= 120s budget";
    return {false, d.str()};
  }
  d << " < 120s";
  return {true, d.str()};
}

// --- criterion 2: randomized axiom audit -----------------------------------

Outcome criterion_axiom_suite() {
  Stopwatch watch;
  AxiomOptions opt;  // 10^4 checks per axiom, d = 2, p in {0.5, 1, 1.5}
  const AxiomReport rep = run_axiom_suite(2024, opt);
  const double secs = watch.seconds();
  std::ostringstream d;
  d << rep.total_checks << " checks across " << rep.results.size()
    << " axiom/functional pairs, " << rep.total_violations << " violations, " << fmt(secs)
    << "s";
  if (!rep.ok()) return {false, d.str()};
  if (secs >= 300.0) {
    d << " >= 300s budget";
    return {false, d.str()};
  }
  d << " < 300s";
  return {true, d.str()};
}

// --- criterion 3: dual domination and superadditivity ----------------------

Outcome criterion_domination_superadditivity() {
  Rng rng = make_stream(SeedSpec{1003}, 0, 0);
  const Box box = unit_box(2);
  const double p_cycle[3] = {0.5, 1.0, 1.5};
  long checks = 0;
  for (int i = 0; i < 200; ++i) {
    const double p = p_cycle[i % 3];
    for (BoundaryFactor fm : {BoundaryFactor::Full, BoundaryFactor::Half}) {
      const double factor = effective_factor(p, fm);
      {
        const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 7), 2);
        if (solve_mst_dual(ps, box, p, factor).value >
            solve_mst(ps, box, p).value + kOracleTol)
          return {false, "tree dual exceeds the plain tree at instance " +
                             std::to_string(i)};
      }
      {
        const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 10), 2);
        if (solve_mm_dual(ps, box, p, factor, 512).value >
            solve_mm_exact(ps, box, p, 512).value + kOracleTol)
          return {false, "matching dual exceeds the plain matching at instance " +
                             std::to_string(i)};
      }
      {
        const PointSet ps = sample_uniform(rng, draw_size(rng, 1, 8), 2);
        if (solve_tsp_dual(ps, box, p, factor, 12, 16).value >
            solve_tsp_exact(ps, box, p, 16).value + kOracleTol)
          return {false, "tour dual exceeds the plain tour at instance " +
                             std::to_string(i)};
      }
      checks += 3;
    }
  }

  DualPropertyOptions opt;  // 10^4 checks, both boundary factors inside
  const DualPropertyReport rep = run_dual_properties(2025, opt);
  std::ostringstream d;
  d << checks << " domination checks pass; audit: domination " << rep.domination_checks
    << "/" << rep.domination_violations << " viol, superadditivity "
    << rep.superadd_checks << "/" << rep.superadd_violations << " viol, tour slack "
    << rep.tsp_slack_checks << "/" << rep.tsp_slack_violations
    << " viol (zero-slack diagnostic failures: " << rep.tsp_zero_slack_failures << ")";
  return {rep.ok(), d.str()};
}

// --- criteria 4 and 5: uniform rate fits ------------------------------------

std::vector<Estimate> mst_series(int dim, const std::vector<long>& grid, long trials,
                                 uint64_t seed) {
  EstimateSpec spec;
  spec.functional = Functional::MST;
  spec.dim = dim;
  spec.p = 1.0;
  std::vector<Estimate> out;
  for (long n : grid) out.push_back(mc_mean(spec, n, trials, SeedSpec{seed}, 1));
  return out;
}

const std::vector<long> kRateGrid = {128, 256, 512, 1024, 2048};

Outcome criterion_rate_d2() {
  const std::vector<Estimate> series = mst_series(2, kRateGrid, 400, 99);
  const RateFit full = fit_alpha(series, 2, 1.0);
  const std::vector<Estimate> tail(series.begin() + 1, series.end());
  const RateFit trunc = fit_alpha(tail, 2, 1.0);
  const double shift = std::abs(full.alpha_hat - trunc.alpha_hat);
  const double allowed = 2.0 * std::hypot(full.alpha_se, trunc.alpha_se);
  const RateFit resid = residual_rate(series, full.alpha_hat, 2, 1.0);

  std::ostringstream d;
  d << "alpha_hat " << fmt(full.alpha_hat) << " +- " << fmt(full.alpha_se)
    << ", truncation shift " << fmt(shift) << (shift < allowed ? " < " : " >= ")
    << fmt(allowed) << ", residual slope ";
  if (!resid.ok()) {
    d << "(" << resid.status << ")";
    return {false, d.str()};
  }
  d << fmt(resid.exponent_hat) << (resid.exponent_hat <= 0.1 ? " <= 0.1" : " > 0.1");
  return {shift < allowed && resid.exponent_hat <= 0.1, d.str()};
}

Outcome criterion_rate_d3() {
  const std::vector<Estimate> series = mst_series(3, kRateGrid, 400, 99);
  const RateFit full = fit_alpha(series, 3, 1.0);
  const RateFit resid = residual_rate(series, full.alpha_hat, 3, 1.0);
  const double limit = 1.0 / 3.0 + 0.1;

  std::ostringstream d;
  d << "model " << full.model << ", alpha_hat " << fmt(full.alpha_hat) << " +- "
    << fmt(full.alpha_se) << ", residual slope ";
  if (full.model != "alpha_plus_correction") return {false, d.str() + "(wrong model)"};
  if (!resid.ok()) {
    d << "(" << resid.status << ")";
    return {false, d.str()};
  }
  d << fmt(resid.exponent_hat) << (resid.exponent_hat <= limit ? " <= " : " > ")
    << fmt(limit);
  return {resid.exponent_hat <= limit, d.str()};
}

// --- criterion 6: plain-vs-dual closeness gap -------------------------------

Outcome criterion_closeness() {
  std::ostringstream d;
  bool pass = true;
  const struct {
    double p;
    long trials;
    double limit;
  } cases[] = {{1.0, 200, 0.1}, {0.5, 400, 0.35}};
  for (const auto& c : cases) {
    const GapSeries series =
        closeness_gap(Functional::MST, 2, c.p, kRateGrid, c.trials, SeedSpec{66}, 1);
    for (const GapPoint& g : series.points)
      if (g.mean < 0.0)
        return {false, "negative mean gap at p=" + fmt(c.p) + " n=" + std::to_string(g.n)};
    const RateFit fit = fit_log_slope(series);
    if (!fit.ok()) {
      d << "p=" << fmt(c.p) << " " << fit.status << "; ";
      pass = false;
      continue;
    }
    const bool ok = fit.exponent_hat <= c.limit;
    d << "p=" << fmt(c.p) << " slope " << fmt(fit.exponent_hat) << (ok ? " <= " : " > ")
      << fmt(c.limit) << "; ";
    pass = pass && ok;
  }
  d << "all means nonnegative";
  return {pass, d.str()};
}

// --- criterion 7: boundary attachment diagnostics ---------------------------

Outcome criterion_boundary() {
  std::ostringstream d;
  const BoundarySeries at1 = boundary_growth(2, 1.0, kRateGrid, 200, SeedSpec{77}, 1);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (size_t i = at1.nb.points.size() / 2; i < at1.nb.points.size(); ++i) {
    const GapPoint& g = at1.nb.points[i];
    const double norm = g.mean / std::sqrt(static_cast<double>(g.n));
    if (first || norm < lo) lo = norm;
    if (first || norm > hi) hi = norm;
    first = false;
  }
  const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  const bool ratio_ok = ratio <= 2.0;
  d << "count ratio " << fmt(ratio) << (ratio_ok ? " <= 2" : " > 2");

  const RateFit lb1 = fit_log_slope(at1.lb);
  d << "; attach-cost slope p=1 "
    << (lb1.ok() ? fmt(lb1.exponent_hat) : lb1.status) << " (reported)";

  // deeper grid: the p=0.5 attachment cost approaches its asymptote slowly
  const BoundarySeries at05 =
      boundary_growth(2, 0.5, {512, 1024, 2048, 4096}, 200, SeedSpec{78}, 1);
  const RateFit lb05 = fit_log_slope(at05.lb);
  bool lb_ok = false;
  if (!lb05.ok()) {
    d << "; p=0.5 " << lb05.status;
  } else {
    lb_ok = lb05.exponent_hat <= 0.35;
    d << "; attach-cost slope p=0.5 " << fmt(lb05.exponent_hat)
      << (lb_ok ? " <= 0.35" : " > 0.35");
  }
  return {ratio_ok && lb_ok, d.str()};
}

// --- criterion 8: perturbation and Poissonization gaps ----------------------

Outcome criterion_perturbation() {
  std::ostringstream d;
  const GapSeries small =
      add_k_gap(Functional::MST, 2, 1.0, 64, {0, 1}, 3000, SeedSpec{88}, 1);
  const GapPoint& k0 = small.points[0];
  if (k0.n != 0 || k0.mean != 0.0 || k0.std_error != 0.0)
    return {false, "k=0 gap is not exactly zero"};
  const double g64 = small.points[1].mean;
  if (!(g64 > 0.0)) return {false, "add-one gap at n=64 is not positive"};

  // fix the envelope constant from the small size, then demand the
  // n^{-p/d} = n^{-1/2} decay at the larger one (25% headroom)
  const double c_add = 10.0 * g64;
  const GapSeries big =
      add_k_gap(Functional::MST, 2, 1.0, 1024, {1}, 3000, SeedSpec{89}, 1);
  const double g1024 = big.points[0].mean;
  const double bound = c_add * std::pow(1024.0, -0.5);
  const bool add_ok = g1024 <= bound;
  d << "k=0 exact; gap(64) " << fmt(g64) << ", gap(1024) " << fmt(g1024)
    << (add_ok ? " <= " : " > ") << fmt(bound) << " envelope";

  const GapSeries pois = poissonization_gap(
      Functional::MST, 2, 1.0, kRateGrid, {8000, 8000, 8000, 800, 400}, SeedSpec{90}, 1);
  const RateFit fit = fit_log_slope(pois);
  bool pois_ok = false;
  if (!fit.ok()) {
    d << "; poisson " << fit.status;
  } else {
    pois_ok = fit.exponent_hat <= 0.15;
    d << "; poisson slope " << fmt(fit.exponent_hat) << (pois_ok ? " <= 0.15" : " > 0.15")
      << " over " << fit.n_grid.size() << " usable points";
    if (!fit.excluded.empty()) {
      d << " (noise-floor excluded:";
      for (long n : fit.excluded) d << " " << n;
      d << ")";
    }
  }
  return {add_ok && pois_ok, d.str()};
}

// --- criterion 9: density approximation bound --------------------------------

Outcome criterion_density_approx() {
  const std::vector<DensityApproxRow> rows =
      density_approx_table({0.5, 1.0, 2.0}, {1, 2, 4, 8, 16}, 2, -1.0);
  double frozen = -1.0;
  for (const DensityApproxRow& r : rows) {
    if (!r.ok)
      return {false, "bound violated at a=" + fmt(r.a) + " m=" + std::to_string(r.m)};
    if (r.a == 2.0 && r.m == 2) frozen = r.gap;
  }
  if (std::abs(frozen - 0.25) > 1e-9)
    return {false, "a=2 m=2 gap " + fmt(frozen) + " differs from 0.25"};
  return {true, std::to_string(rows.size()) +
                    " (a,m) cells within sqrt(d) K/m; a=2 m=2 gap " + fmt(frozen)};
}

// --- criterion 10: nonuniform density trend ----------------------------------

Outcome criterion_nonuniform() {
  const std::vector<Estimate> series = mst_series(2, kRateGrid, 400, 99);
  const RateFit alpha = fit_alpha(series, 2, 1.0);

  std::ostringstream d;
  d << "alpha_hat " << fmt(alpha.alpha_hat) << "; ";
  bool pass = true;

  auto assess = [&](const char* label, const NonuniformResult& nr, double limit) {
    const GapPoint& head = nr.gaps.points.front();
    const GapPoint& tail = nr.gaps.points.back();
    const bool separated = std::abs(head.mean) > 2.0 * head.std_error &&
                           std::abs(tail.mean) > 2.0 * tail.std_error &&
                           std::abs(tail.mean) < std::abs(head.mean);
    if (!separated) {
      // an honest inconclusive outcome: report the endpoints and noise levels
      d << label << " inconclusive (gap " << fmt(head.mean) << "+-" << fmt(head.std_error)
        << " -> " << fmt(tail.mean) << "+-" << fmt(tail.std_error)
        << " lacks signal separation); ";
      return;
    }
    if (!nr.slope.ok()) {
      d << label << " " << nr.slope.status << "; ";
      pass = false;
      return;
    }
    const bool ok = nr.slope.exponent_hat <= limit;
    d << label << " gap " << fmt(head.mean) << " -> " << fmt(tail.mean) << ", slope "
      << fmt(nr.slope.exponent_hat) << (ok ? " <= " : " > ") << fmt(limit) << "; ";
    pass = pass && ok;
  };

  const BlockDensity bd(2, 2, {2.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0});
  assess("block",
         block_density_experiment(Functional::MST, bd, 1.0, kRateGrid, 400,
                                  alpha.alpha_hat, alpha.alpha_se, SeedSpec{110}, 1),
         -0.5 + 0.1);
  const NonuniformResult hr =
      holder_density_experiment(Functional::MST, HolderDensity(1.0, 2), 1.0, kRateGrid,
                                400, alpha.alpha_hat, alpha.alpha_se, SeedSpec{111}, 1);
  assess("affine density", hr, -1.0 / 6.0 + 0.1);
  d << "density power integral " << fmt(hr.integral);
  return {pass, d.str()};
}

// --- criterion 11: seeded determinism ----------------------------------------

bool csv_values_match(const std::string& a, const std::string& b, double tol,
                      std::string& why) {
  std::istringstream ia(a), ib(b);
  std::string la, lb;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(ia, la));
    const bool gb = static_cast<bool>(std::getline(ib, lb));
    if (ga != gb) {
      why = "row counts differ";
      return false;
    }
    if (!ga) return true;
    std::vector<std::string> ca, cb;
    std::istringstream sa(la), sb(lb);
    std::string tok;
    while (std::getline(sa, tok, ',')) ca.push_back(tok);
    while (std::getline(sb, tok, ',')) cb.push_back(tok);
    if (ca.size() != cb.size()) {
      why = "column counts differ";
      return false;
    }
    for (size_t i = 0; i < ca.size(); ++i) {
      if (ca[i] == cb[i]) continue;
      // mean and stderr columns may differ in representation, compare as values
      char* end = nullptr;
      const double va = std::strtod(ca[i].c_str(), &end);
      const bool na = end && *end == '\0';
      const double vb = std::strtod(cb[i].c_str(), &end);
      const bool nb = end && *end == '\0';
      if (!na || !nb || std::abs(va - vb) > tol) {
        why = "field '" + ca[i] + "' vs '" + cb[i] + "'";
        return false;
      }
    }
  }
}

Outcome criterion_determinism() {
  const std::string base =
      "[estimate]\nfunctional = mst\nn_grid = 16 32 64\ntrials = 50\nseed = 77\n";
  const DriverResult r1 = run_request(read_config_text(base + "threads = 1\n"));
  const DriverResult r2 = run_request(read_config_text(base + "threads = 1\n"));
  if (r1.artifacts.size() != 1 || r2.artifacts.size() != 1)
    return {false, "estimate did not produce exactly one CSV artifact"};
  if (r1.artifacts[0].content != r2.artifacts[0].content)
    return {false, "rerun with the same seed changed the CSV bytes"};

  const DriverResult r8 = run_request(read_config_text(base + "threads = 8\n"));
  std::string why;
  if (!csv_values_match(r1.artifacts[0].content, r8.artifacts[0].content, 1e-12, why))
    return {false, "threads=8 CSV differs beyond 1e-12: " + why};

  // same contract via the installed command-line binary
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pwe_acceptance_cli";
  fs::create_directories(dir);
  const fs::path csv = dir / "det.csv";
  const std::string cmd = std::string(PWE_CLI_PATH) +
                          " estimate --functional mst --n-grid 16,32 --trials 20"
                          " --seed 7 --out " +
                          csv.string() + " >/dev/null 2>&1";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  if (std::system(cmd.c_str()) != 0) {
    fs::remove_all(dir);
    return {false, "command-line estimate run failed"};
  }
  const std::string first = slurp(csv);
  if (std::system(cmd.c_str()) != 0) {
    fs::remove_all(dir);
    return {false, "command-line estimate rerun failed"};
  }
  const std::string second = slurp(csv);
  fs::remove_all(dir);
  if (first.empty() || first != second)
    return {false, "command-line reruns with the same seed differ"};

  return {true, "library rerun byte-identical, threads=8 value-identical, "
                "process rerun byte-identical"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "exact solvers match brute-force enumeration", criterion_oracle_equivalence},
    {2, "randomized axiom audit", criterion_axiom_suite},
    {3, "dual domination and superadditivity", criterion_domination_superadditivity},
    {4, "uniform rate fit d=2 p=1", criterion_rate_d2},
    {5, "uniform rate fit d=3 p=1", criterion_rate_d3},
    {6, "plain vs dual closeness gap", criterion_closeness},
    {7, "boundary attachment diagnostics", criterion_boundary},
    {8, "perturbation and Poissonization gaps", criterion_perturbation},
    {9, "density approximation bound", criterion_density_approx},
    {10, "nonuniform density trend", criterion_nonuniform},
    {11, "seeded determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }

  int ran = 0;
  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
