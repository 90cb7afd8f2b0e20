// Command-line front end. Everything goes through the public C API: point
// sets and single solves via pwe_solve, experiments via one-section request
// documents handed to pwe_run_experiment. Artifacts coming back from a run
// are persisted here with write-to-temp + atomic rename.
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "pwe/pwe.h"

namespace {

[[noreturn]] void fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(2);
}

void check(pwe_status status) {
  if (status != PWE_OK) fail(pwe_last_error());
}

std::string fmt_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  std::string s(buf);
  // integral results still read as reals; inf/nan pass through
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find('n') == std::string::npos)
    s += ".0";
  return s;
}

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) fail("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail("cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Defaults for one experiment from an INI config file; full validation of
// keys happens inside the library, this only locates the section.
std::map<std::string, std::string> load_config_section(const std::string& path,
                                                       const std::string& section) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path);
  std::map<std::string, std::string> out;
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("config line " + std::to_string(lineno) + ": unterminated section");
      current = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail("config line " + std::to_string(lineno) + ": expected key = value");
    if (current == section) out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// Declares a subcommand whose options map one-to-one onto request keys.
// Priority: explicit flag > config section entry > library default.
class RequestBuilder {
 public:
  RequestBuilder(CLI::App& app, const std::string& name, const std::string& desc)
      : cmd_(app.add_subcommand(name, desc)) {
    cmd_->add_option("--config", config_path_,
                     "config file; the [" + name + "] section supplies defaults");
  }

  CLI::App* cmd() { return cmd_; }
  bool parsed() const { return cmd_->parsed(); }

  void option(const std::string& flag, const std::string& key, const std::string& desc) {
    auto store = std::make_shared<std::string>();
    options_.emplace_back(cmd_->add_option(flag, *store, desc), key, store);
  }
  void flag(const std::string& flag, const std::string& key, const std::string& desc) {
    auto store = std::make_shared<bool>(false);
    flags_.emplace_back(cmd_->add_flag(flag, *store, desc), key, store);
  }

  int run() const {
    std::map<std::string, std::string> kv;
    if (!config_path_.empty()) kv = load_config_section(config_path_, cmd_->get_name());
    for (const auto& [opt, key, store] : options_)
      if (opt->count() > 0) kv[key] = *store;
    for (const auto& [opt, key, store] : flags_)
      if (opt->count() > 0) kv[key] = *store ? "true" : "false";

    std::ostringstream request;
    request << "[" << cmd_->get_name() << "]\n";
    for (const auto& [key, value] : kv) request << key << " = " << value << "\n";

    pwe_report* report = nullptr;
    check(pwe_run_experiment(request.str().c_str(), &report));
    const char* text = nullptr;
    check(pwe_report_text(report, &text));
    std::cout << text;
    long artifacts = 0;
    check(pwe_report_artifact_count(report, &artifacts));
    for (long i = 0; i < artifacts; ++i) {
      const char* name = nullptr;
      const char* data = nullptr;
      check(pwe_report_artifact(report, i, &name, &data));
      write_atomic(name, data);
      std::cerr << "wrote " << name << "\n";
    }
    int code = 0;
    check(pwe_report_exit_code(report, &code));
    pwe_report_free(report);
    return code;
  }

 private:
  CLI::App* cmd_;
  std::string config_path_;
  std::vector<std::tuple<CLI::Option*, std::string, std::shared_ptr<std::string>>> options_;
  std::vector<std::tuple<CLI::Option*, std::string, std::shared_ptr<bool>>> flags_;
};

void add_sampler_options(RequestBuilder& b) {
  b.option("--sampler", "sampler", "point source: uniform|poisson|block|holder");
  b.option("--block", "block", "block density as 'm d w1 w2 ...' (row-major cell weights)");
  b.option("--holder-a", "holder_a", "slope of the affine density 1 + a(x1 - 1/2)");
}

int run_solve(const std::string& in_path, const std::string& functional,
              const std::string& variant, const std::string& mode,
              const std::string& factor, double p, bool edges) {
  pwe_pointset* ps = nullptr;
  check(pwe_pointset_parse(read_input(in_path).c_str(), &ps));
  pwe_solution* sol = nullptr;
  check(pwe_solve(ps, functional.c_str(), variant.c_str(), mode.c_str(), factor.c_str(),
                  p, &sol));

  double value = 0.0;
  check(pwe_solution_value(sol, &value));
  std::cout << "value " << fmt_value(value) << "\n";
  if (variant == "dual") {
    long n_b = 0;
    double l_b = 0.0;
    check(pwe_solution_boundary(sol, &n_b, &l_b));
    std::cout << "N_B=" << n_b << " L_B=" << fmt_value(l_b) << "\n";
  }
  if (edges) {
    long count = 0;
    check(pwe_solution_edge_count(sol, &count));
    for (long i = 0; i < count; ++i) {
      long a = 0, b = 0;
      check(pwe_solution_edge(sol, i, &a, &b));
      std::cout << (a < 0 ? std::string("B") : std::to_string(a)) << " "
                << (b < 0 ? std::string("B") : std::to_string(b)) << "\n";
    }
  }
  pwe_solution_free(sol);
  pwe_pointset_free(ps);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Power-weighted Euclidean functionals: exact and heuristic solvers for "
      "minimal matching, spanning tree, and tour values, their boundary-rooted "
      "duals, and Monte Carlo rate experiments."};
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  std::string in_path = "-";
  std::string functional;
  std::string variant = "plain";
  std::string mode = "exact";
  std::string factor = "auto";
  double p = 1.0;
  bool edges = false;
  CLI::App* solve = app.add_subcommand("solve", "solve one instance read as point-set text");
  solve->add_option("--functional", functional, "mm|mst|tsp")->required();
  solve->add_option("--p", p, "edge-weight power (default 1)");
  solve->add_option("--variant", variant, "plain|dual (default plain)");
  solve->add_option("--mode", mode, "exact|heuristic (default exact)");
  solve->add_option("--factor", factor, "boundary attachment factor: auto|full|half");
  solve->add_option("--in", in_path, "point-set file, '-' for stdin (default)");
  solve->add_flag("--edges", edges, "also print the edge list; boundary endpoint prints as B");

  // --- experiments ---------------------------------------------------------
  RequestBuilder axioms(app, "axioms", "randomized audit of the functional axioms");
  axioms.option("--trials", "trials", "checks per axiom (default 10000)");
  axioms.option("--seed", "seed", "experiment seed (default 12345)");
  axioms.option("--max-n", "max_n", "largest instance size drawn (default 12)");
  axioms.option("--d", "d", "dimension (default 2)");
  axioms.option("--dual-trials", "dual_trials",
                "also audit boundary-dual properties with this many checks");

  RequestBuilder estimate(app, "estimate", "Monte Carlo means over an n grid (writes CSV)");
  estimate.option("--functional", "functional", "mm|mst|tsp (default mst)");
  estimate.option("--variant", "variant", "plain|dual (default plain)");
  estimate.option("--mode", "mode", "exact|heuristic (default exact)");
  estimate.option("--factor", "factor", "auto|full|half (default auto)");
  estimate.option("--d", "d", "dimension (default 2)");
  estimate.option("--p", "p", "edge-weight power (default 1)");
  add_sampler_options(estimate);
  estimate.option("--n-grid", "n_grid", "comma-separated sample sizes (required)");
  estimate.option("--trials", "trials", "trials per grid point (default 400)");
  estimate.option("--seed", "seed", "experiment seed (required)");
  estimate.option("--threads", "threads", "worker threads (default 1)");
  estimate.option("--out", "out", "CSV path (default estimates.csv)");

  RequestBuilder rates(app, "rates", "estimate the limit constant and residual rate");
  rates.option("--functional", "functional", "mm|mst|tsp (default mst)");
  rates.option("--d", "d", "dimension (default 2)");
  rates.option("--p", "p", "edge-weight power (default 1)");
  add_sampler_options(rates);
  rates.option("--n-grid", "n_grid", "comma-separated sample sizes, at least 4 (required)");
  rates.option("--trials", "trials", "trials per grid point (default 400)");
  rates.option("--seed", "seed", "experiment seed (required)");
  rates.option("--threads", "threads", "worker threads (default 1)");
  rates.option("--out", "out", "CSV path (default rates.csv)");
  rates.flag("--plot", "plot", "also write a log-log SVG plot");
  rates.option("--plot-out", "plot_out", "SVG path (default rates.svg)");
  rates.option("--assert-residual-slope", "assert_residual_slope",
               "fail (exit 1) if the residual log-log slope exceeds this");

  RequestBuilder gaps(app, "gaps", "paired-gap experiments (closeness, perturbation, "
                                   "Poissonization, boundary growth, densities)");
  gaps.option("--kind", "kind",
              "closeness|perturb|poisson|boundary|block|holder (required)");
  gaps.option("--functional", "functional", "mm|mst|tsp (default mst)");
  gaps.option("--d", "d", "dimension (default 2)");
  gaps.option("--p", "p", "edge-weight power (default 1)");
  gaps.option("--n-grid", "n_grid", "comma-separated sample sizes");
  gaps.option("--n", "n", "base sample size for kind=perturb");
  gaps.option("--k-list", "k_list", "added-point counts for kind=perturb");
  gaps.option("--trials", "trials", "trials per grid point (default 400)");
  gaps.option("--trials-list", "trials_list", "per-grid-point trials for kind=poisson");
  gaps.option("--seed", "seed", "experiment seed (required)");
  gaps.option("--threads", "threads", "worker threads (default 1)");
  gaps.option("--assert-slope", "assert_slope",
              "fail (exit 1) if the gap log-log slope exceeds this");
  gaps.option("--assert-ratio-max", "assert_ratio_max",
              "kind=boundary: max spread of E N_B / n^{(d-1)/d} over the upper half grid");
  gaps.option("--assert-lb-slope", "assert_lb_slope",
              "kind=boundary: maximal attachment-cost log-log slope");
  gaps.option("--alpha-hat", "alpha_hat", "limit constant from a prior rates run");
  gaps.option("--alpha-se", "alpha_se", "stderr of alpha_hat");
  add_sampler_options(gaps);
  gaps.option("--out", "out", "CSV path (default gaps.csv)");

  RequestBuilder density(app, "density-approx",
                         "block approximation error vs the smoothness bound");
  density.option("--a", "a", "density slopes, comma-separated (default 0.5,1,2)");
  density.option("--m", "m", "cells per axis, comma-separated (default 1,2,4,8,16)");
  density.option("--d", "d", "dimension (default 2)");
  density.option("--beta", "beta", "smoothness exponent (only 1 supported)");
  density.option("--K", "K", "smoothness constant override (default: slope |a|)");

  RequestBuilder report(app, "report", "aggregate estimate CSVs into one summary");
  report.option("--inputs", "inputs", "comma-separated CSV paths (required)");
  report.option("--out", "out", "also write the summary to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (solve->parsed())
    return run_solve(in_path, functional, variant, mode, factor, p, edges);
  for (const RequestBuilder* b : {&axioms, &estimate, &rates, &gaps, &density, &report})
    if (b->parsed()) return b->run();
  return 2;  // unreachable: require_subcommand(1)
}
