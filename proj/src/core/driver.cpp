#include "core/driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/axioms.hpp"
#include "core/common.hpp"
#include "core/experiments.hpp"

namespace pwe {

namespace {

class Request {
 public:
  explicit Request(const ConfigSection& section) : s_(section) {}

  const std::string* find(const std::string& key) const { return s_.find(key); }

  std::string str(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
  }
  std::string required(const std::string& key) const {
    const std::string* v = find(key);
    if (!v || v->empty())
      throw ConfigError("[" + s_.name + "] requires key '" + key + "'");
    return *v;
  }
  long integer(const std::string& key, long fallback) const {
    const std::string* v = find(key);
    return v ? parse_long(key, *v) : fallback;
  }
  double real(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    return v ? parse_double(key, *v) : fallback;
  }
  bool flag(const std::string& key, bool fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + *v + "'");
  }
  std::vector<long> integer_list(const std::string& key) const {
    std::vector<long> out;
    for (const std::string& tok : split(required(key))) out.push_back(parse_long(key, tok));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
  }
  std::vector<double> real_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& tok : split(required(key))) out.push_back(parse_double(key, tok));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
  }
  uint64_t seed_required() const {
    const std::string* v = find("seed");
    if (!v) throw ConfigError("[" + s_.name + "] requires a seed (reproducibility contract)");
    return static_cast<uint64_t>(parse_long("seed", *v));
  }

  static std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
      if (c == ',' || c == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  static long parse_long(const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const long r = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
  }
  static double parse_double(const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const double r = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
  }

 private:
  const ConfigSection& s_;
};

Functional parse_functional(const std::string& v) {
  if (v == "mm") return Functional::MM;
  if (v == "mst") return Functional::MST;
  if (v == "tsp") return Functional::TSP;
  throw ConfigError("unknown functional '" + v + "' (expected mm|mst|tsp)");
}

Variant parse_variant(const std::string& v) {
  if (v == "plain") return Variant::Plain;
  if (v == "dual") return Variant::Dual;
  throw ConfigError("unknown variant '" + v + "' (expected plain|dual)");
}

Mode parse_mode(const std::string& v) {
  if (v == "exact") return Mode::Exact;
  if (v == "heuristic") return Mode::Heuristic;
  throw ConfigError("unknown mode '" + v + "' (expected exact|heuristic)");
}

BoundaryFactor parse_factor(const std::string& v) {
  if (v == "auto") return BoundaryFactor::Auto;
  if (v == "full") return BoundaryFactor::Full;
  if (v == "half") return BoundaryFactor::Half;
  throw ConfigError("unknown factor '" + v + "' (expected auto|full|half)");
}

SamplerSpec parse_sampler(const Request& req, int dim) {
  SamplerSpec spec;
  const std::string kind = req.str("sampler", "uniform");
  if (kind == "uniform") {
    spec.kind = SamplerSpec::Kind::Uniform;
  } else if (kind == "poisson") {
    spec.kind = SamplerSpec::Kind::Poisson;
  } else if (kind == "block") {
    spec.kind = SamplerSpec::Kind::Block;
    // block = <m> <d> <weight per cell ...>, row-major cells
    const std::vector<double> vals = req.real_list("block");
    if (vals.size() < 3) throw ConfigError("key 'block': expected m d weights...");
    const int m = static_cast<int>(vals[0]);
    const int d = static_cast<int>(vals[1]);
    spec.block = BlockDensity(m, d, std::vector<double>(vals.begin() + 2, vals.end()));
    if (d != dim) throw ConfigError("block density dimension differs from d");
  } else if (kind == "holder") {
    spec.kind = SamplerSpec::Kind::Holder;
    spec.holder = HolderDensity(req.real("holder_a", 1.0), dim);
  } else {
    throw ConfigError("unknown sampler '" + kind + "'");
  }
  return spec;
}

std::string gap_csv(const GapSeries& series, Functional f, int dim, double p,
                    uint64_t seed) {
  std::ostringstream out;
  out << csv_header() << "\n";
  for (const GapPoint& g : series.points) {
    Estimate e;
    e.functional = f;
    e.variant = Variant::Plain;
    e.dim = dim;
    e.p = p;
    e.sampler = series.name;
    e.n = g.n;
    e.trials = g.trials;
    e.mean = g.mean;
    e.std_error = g.std_error;
    e.seed = seed;
    out << csv_row(e) << "\n";
  }
  return out.str();
}

std::string series_text(const GapSeries& series) {
  std::ostringstream out;
  for (const GapPoint& g : series.points)
    out << series.name << " n=" << g.n << " mean=" << format_double(g.mean)
        << " stderr=" << format_double(g.std_error) << " trials=" << g.trials << "\n";
  return out.str();
}

// slope assertion shared by rates and gaps: 0 pass, 1 fail, 3 inconclusive
int apply_slope_assert(std::ostringstream& text, const RateFit& fit, double limit,
                       const std::string& label) {
  if (!fit.ok()) {
    text << label << ": " << fit.status << "\n";
    return 3;
  }
  const bool pass = fit.exponent_hat <= limit;
  text << label << ": slope " << format_double(fit.exponent_hat)
       << (pass ? " <= " : " > ") << format_double(limit) << (pass ? " pass" : " FAIL")
       << "\n";
  return pass ? 0 : 1;
}

int merge_exit(int a, int b) {
  // 1 (violation) dominates, then 3 (inconclusive), then 0
  if (a == 1 || b == 1) return 1;
  if (a == 3 || b == 3) return 3;
  return std::max(a, b);
}

DriverResult run_axioms(const Request& req) {
  AxiomOptions opt;
  opt.checks_per_axiom = req.integer("trials", 10000);
  opt.max_n = static_cast<int>(req.integer("max_n", 12));
  opt.dim = static_cast<int>(req.integer("d", 2));
  const uint64_t seed = static_cast<uint64_t>(req.integer("seed", 12345));
  const long dual_checks = req.integer("dual_trials", 0);

  DriverResult res;
  std::ostringstream text;
  const AxiomReport report = run_axiom_suite(seed, opt);
  text << format_axiom_report(report);
  bool ok = report.ok();
  if (dual_checks > 0) {
    DualPropertyOptions dopt;
    dopt.checks = dual_checks;
    dopt.dim = opt.dim;
    const DualPropertyReport dual = run_dual_properties(seed, dopt);
    text << format_dual_report(dual);
    ok = ok && dual.ok();
  }
  res.exit_code = ok ? 0 : 1;
  res.text = text.str();
  return res;
}

DriverResult run_estimate(const Request& req) {
  EstimateSpec spec;
  spec.functional = parse_functional(req.str("functional", "mst"));
  spec.variant = parse_variant(req.str("variant", "plain"));
  spec.mode = parse_mode(req.str("mode", "exact"));
  spec.factor = parse_factor(req.str("factor", "auto"));
  spec.dim = static_cast<int>(req.integer("d", 2));
  spec.p = req.real("p", 1.0);
  spec.sampler = parse_sampler(req, spec.dim);
  const std::vector<long> grid = req.integer_list("n_grid");
  const long trials = req.integer("trials", 400);
  const SeedSpec seed{req.seed_required()};
  const int threads = static_cast<int>(req.integer("threads", 1));

  DriverResult res;
  std::ostringstream csv, text;
  csv << csv_header() << "\n";
  for (long n : grid) {
    const Estimate e = mc_mean(spec, n, trials, seed, threads);
    csv << csv_row(e) << "\n";
    text << "n=" << e.n << " mean=" << format_double(e.mean)
         << " stderr=" << format_double(e.std_error) << "\n";
  }
  res.artifacts.push_back({req.str("out", "estimates.csv"), csv.str()});
  res.text = text.str();
  return res;
}

DriverResult run_rates(const Request& req) {
  EstimateSpec spec;
  spec.functional = parse_functional(req.str("functional", "mst"));
  spec.dim = static_cast<int>(req.integer("d", 2));
  spec.p = req.real("p", 1.0);
  spec.sampler = parse_sampler(req, spec.dim);
  const std::vector<long> grid = req.integer_list("n_grid");
  const long trials = req.integer("trials", 400);
  const SeedSpec seed{req.seed_required()};
  const int threads = static_cast<int>(req.integer("threads", 1));

  DriverResult res;
  std::ostringstream csv, text;
  csv << csv_header() << "\n";
  std::vector<Estimate> series;
  for (long n : grid) {
    series.push_back(mc_mean(spec, n, trials, seed, threads));
    csv << csv_row(series.back()) << "\n";
    text << "n=" << n << " mean=" << format_double(series.back().mean)
         << " stderr=" << format_double(series.back().std_error) << "\n";
  }
  const RateFit alpha = fit_alpha(series, spec.dim, spec.p);
  const RateFit resid = residual_rate(series, alpha.alpha_hat, spec.dim, spec.p);
  text << format_rate_fit(alpha, "alpha");
  text << format_rate_fit(resid, "residual");

  int exit_code = 0;
  if (req.find("assert_residual_slope"))
    exit_code = apply_slope_assert(text, resid, req.real("assert_residual_slope", 0.0),
                                   "assert residual slope");
  if (req.flag("plot", false)) {
    GapSeries pts;
    pts.name = "mean";
    for (const Estimate& e : series)
      pts.points.push_back({e.n, e.mean, e.std_error, e.trials});
    RateFit line;
    line.c_hat = alpha.alpha_hat;
    line.exponent_hat = rate_exponent(spec.dim, spec.p);
    res.artifacts.push_back(
        {req.str("plot_out", "rates.svg"), render_loglog_svg(pts, line, "mean value")});
  }
  res.artifacts.push_back({req.str("out", "rates.csv"), csv.str()});
  res.exit_code = exit_code;
  res.text = text.str();
  return res;
}

DriverResult run_gaps(const Request& req) {
  const std::string kind = req.required("kind");
  const Functional f = parse_functional(req.str("functional", "mst"));
  const int dim = static_cast<int>(req.integer("d", 2));
  const double p = req.real("p", 1.0);
  const SeedSpec seed{req.seed_required()};
  const int threads = static_cast<int>(req.integer("threads", 1));
  const long trials = req.integer("trials", 400);

  DriverResult res;
  std::ostringstream text;
  int exit_code = 0;

  if (kind == "closeness") {
    const GapSeries series =
        closeness_gap(f, dim, p, req.integer_list("n_grid"), trials, seed, threads);
    text << series_text(series);
    if (req.find("assert_slope"))
      exit_code = apply_slope_assert(text, fit_log_slope(series),
                                     req.real("assert_slope", 0.0), "assert gap slope");
    res.artifacts.push_back(
        {req.str("out", "gaps.csv"), gap_csv(series, f, dim, p, seed.experiment_seed)});
  } else if (kind == "perturb") {
    const long n = req.integer("n", 1024);
    const GapSeries series =
        add_k_gap(f, dim, p, n, req.integer_list("k_list"), trials, seed, threads);
    text << series_text(series);
    for (const GapPoint& g : series.points) {
      if (g.n == 0 && (g.mean != 0.0 || g.std_error != 0.0)) {
        text << "k=0 gap must be exactly zero: FAIL\n";
        exit_code = merge_exit(exit_code, 1);
      }
    }
    res.artifacts.push_back(
        {req.str("out", "gaps.csv"), gap_csv(series, f, dim, p, seed.experiment_seed)});
  } else if (kind == "poisson") {
    const std::vector<long> grid = req.integer_list("n_grid");
    std::vector<long> per_n;
    if (req.find("trials_list"))
      per_n = req.integer_list("trials_list");
    else
      per_n.assign(grid.size(), trials);
    const GapSeries series = poissonization_gap(f, dim, p, grid, per_n, seed, threads);
    text << series_text(series);
    if (req.find("assert_slope"))
      exit_code = apply_slope_assert(text, fit_log_slope(series),
                                     req.real("assert_slope", 0.0), "assert gap slope");
    res.artifacts.push_back(
        {req.str("out", "gaps.csv"), gap_csv(series, f, dim, p, seed.experiment_seed)});
  } else if (kind == "boundary") {
    const BoundarySeries series =
        boundary_growth(dim, p, req.integer_list("n_grid"), trials, seed, threads);
    text << series_text(series.nb);
    text << series_text(series.lb);
    if (req.find("assert_ratio_max")) {
      // normalized count E N_B / n^{(d-1)/d}, spread over the grid's later half
      const size_t total = series.nb.points.size();
      const size_t from = total / 2;
      double lo = 0.0, hi = 0.0;
      bool first = true;
      for (size_t i = from; i < total; ++i) {
        const GapPoint& g = series.nb.points[i];
        const double norm =
            g.mean / std::pow(static_cast<double>(g.n), (dim - 1.0) / dim);
        if (first || norm < lo) lo = norm;
        if (first || norm > hi) hi = norm;
        first = false;
      }
      const double limit = req.real("assert_ratio_max", 2.0);
      const bool pass = !first && lo > 0.0 && hi / lo <= limit;
      text << "assert boundary count ratio: " << format_double(first ? 0.0 : hi / lo)
           << (pass ? " <= " : " > ") << format_double(limit)
           << (pass ? " pass" : " FAIL") << "\n";
      exit_code = merge_exit(exit_code, pass ? 0 : 1);
    }
    if (req.find("assert_lb_slope"))
      exit_code = merge_exit(
          exit_code, apply_slope_assert(text, fit_log_slope(series.lb),
                                        req.real("assert_lb_slope", 0.0),
                                        "assert boundary cost slope"));
    std::string csv = gap_csv(series.nb, Functional::MST, dim, p, seed.experiment_seed);
    const std::string lb_csv =
        gap_csv(series.lb, Functional::MST, dim, p, seed.experiment_seed);
    const size_t header_end = lb_csv.find('\n');
    csv += lb_csv.substr(header_end + 1);
    res.artifacts.push_back({req.str("out", "gaps.csv"), csv});
  } else if (kind == "block" || kind == "holder") {
    const double alpha_hat = req.real("alpha_hat", 0.0);
    if (!(alpha_hat > 0.0))
      throw ConfigError("gaps kind=" + kind + " requires alpha_hat from a prior rates run");
    const double alpha_se = req.real("alpha_se", 0.0);
    NonuniformResult nr;
    if (kind == "block") {
      SamplerSpec sampler = parse_sampler(req, dim);
      if (sampler.kind != SamplerSpec::Kind::Block)
        throw ConfigError("gaps kind=block requires sampler=block");
      nr = block_density_experiment(f, sampler.block, p, req.integer_list("n_grid"), trials,
                                    alpha_hat, alpha_se, seed, threads);
    } else {
      const HolderDensity h(req.real("holder_a", 1.0), dim);
      nr = holder_density_experiment(f, h, p, req.integer_list("n_grid"), trials, alpha_hat,
                                     alpha_se, seed, threads);
    }
    text << "density_power_integral=" << format_double(nr.integral) << "\n";
    text << series_text(nr.gaps);
    text << format_rate_fit(nr.slope, "gap slope");
    if (req.find("assert_slope"))
      exit_code = apply_slope_assert(text, nr.slope, req.real("assert_slope", 0.0),
                                     "assert gap slope");
    res.artifacts.push_back(
        {req.str("out", "gaps.csv"), gap_csv(nr.gaps, f, dim, p, seed.experiment_seed)});
  } else {
    throw ConfigError("unknown gaps kind '" + kind +
                      "' (closeness|perturb|poisson|boundary|block|holder)");
  }

  res.exit_code = exit_code;
  res.text = text.str();
  return res;
}

DriverResult run_density_approx(const Request& req) {
  const std::vector<double> a_list =
      req.find("a") ? req.real_list("a") : std::vector<double>{0.5, 1.0, 2.0};
  std::vector<int> m_list;
  if (req.find("m")) {
    for (long m : req.integer_list("m")) m_list.push_back(static_cast<int>(m));
  } else {
    m_list = {1, 2, 4, 8, 16};
  }
  const int dim = static_cast<int>(req.integer("d", 2));
  const double beta = req.real("beta", 1.0);
  if (beta != 1.0) throw ConfigError("only beta = 1 densities are implemented");
  const double k_override = req.real("K", -1.0);

  const std::vector<DensityApproxRow> rows = density_approx_table(a_list, m_list, dim,
                                                                  k_override);
  DriverResult res;
  res.text = format_density_approx(rows);
  for (const DensityApproxRow& r : rows)
    if (!r.ok) res.exit_code = 1;
  return res;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DriverResult run_report(const Request& req) {
  std::vector<std::string> texts;
  for (const std::string& path : Request::split(req.required("inputs")))
    texts.push_back(read_text_file(path));
  DriverResult res;
  res.text = summarize_csv(texts);
  const std::string out = req.str("out", "");
  if (!out.empty()) res.artifacts.push_back({out, res.text});
  return res;
}

}  // namespace

DriverResult run_request(const ConfigDoc& request) {
  const ConfigSection* section = nullptr;
  for (const ConfigSection& s : request.sections)
    if (!s.name.empty()) {
      if (section) throw ConfigError("request must contain exactly one experiment section");
      section = &s;
    }
  if (!section) throw ConfigError("request must contain an experiment section");
  const Request req(*section);
  if (section->name == "axioms") return run_axioms(req);
  if (section->name == "estimate") return run_estimate(req);
  if (section->name == "rates") return run_rates(req);
  if (section->name == "gaps") return run_gaps(req);
  if (section->name == "density-approx") return run_density_approx(req);
  if (section->name == "report") return run_report(req);
  throw ConfigError("unknown experiment '" + section->name + "'");
}

}  // namespace pwe
