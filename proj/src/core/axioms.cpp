#include "core/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/common.hpp"
#include "core/dual.hpp"
#include "core/sampling.hpp"

namespace pwe {

namespace {

constexpr double kTol = 1e-9;

int uniform_int(Rng& rng, int lo, int hi) {
  const int span = hi - lo + 1;
  int v = lo + static_cast<int>(rng.uniform01() * span);
  return std::min(v, hi);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return lo + rng.uniform01() * (hi - lo);
}

double plain_value(Functional f, const PointSet& ps, const Box& box, double p) {
  Instance inst;
  inst.points = ps;
  inst.box = box;
  inst.p = p;
  inst.functional = f;
  return solve(inst).value;
}

double dual_value(Functional f, const PointSet& ps, const Box& box, double p,
                  BoundaryFactor factor) {
  Instance inst;
  inst.points = ps;
  inst.box = box;
  inst.p = p;
  inst.functional = f;
  inst.variant = Variant::Dual;
  inst.factor = factor;
  return solve(inst).value;
}

struct MarginTracker {
  AxiomResult* row;
  DualPropertyReport* dual = nullptr;
  bool first = true;

  void record(double margin) {
    if (row) {
      if (first || margin < row->worst_margin) row->worst_margin = margin;
      if (margin < 0.0) ++row->violations;
      ++row->checks;
    }
    if (dual && (first || margin < dual->worst_margin)) dual->worst_margin = margin;
    first = false;
  }
};

}  // namespace

AxiomReport run_axiom_suite(uint64_t seed, const AxiomOptions& opt) {
  if (opt.checks_per_axiom < 1) throw UsageError("axioms: need at least one check");
  if (opt.max_n < 4) throw UsageError("axioms: max_n too small");
  AxiomReport report;
  const Functional fs[] = {Functional::MM, Functional::MST, Functional::TSP};
  const char* axiom_names[] = {"null", "scaling", "smoothness", "subadditivity", "growth"};
  const Box unit = unit_box(opt.dim);
  const SeedSpec spec{seed};

  uint64_t stream_id = 0;
  for (int ax = 0; ax < 5; ++ax) {
    for (Functional f : fs) {
      AxiomResult row;
      row.axiom = axiom_names[ax];
      row.functional = f;
      MarginTracker track{&row};
      ++stream_id;
      Rng rng = make_stream(spec, stream_id, 0);

      for (long c = 0; c < opt.checks_per_axiom; ++c) {
        const double p = opt.p_list[c % opt.p_list.size()];
        switch (ax) {
          case 0: {  // null: empty input costs exactly zero
            PointSet empty(opt.dim);
            track.record(kTol - std::abs(plain_value(f, empty, unit, p)));
            break;
          }
          case 1: {  // scaling: L(y + tA) = t^p L(A), relative 1e-9
            const int n = uniform_int(rng, 0, opt.max_n);
            PointSet ps = sample_uniform(rng, n, opt.dim);
            Point y(opt.dim);
            for (double& c2 : y) c2 = uniform_real(rng, -5.0, 5.0);
            const double t =
                std::exp(uniform_real(rng, std::log(0.1), std::log(10.0)));
            const double base = plain_value(f, ps, unit, p);
            const double mapped =
                plain_value(f, affine_image(ps, y, t), affine_image(unit, y, t), p);
            const double err = std::abs(mapped - std::pow(t, p) * base);
            track.record(kTol * (1.0 + std::pow(t, p) * base) - err);
            break;
          }
          case 2: {  // smoothness: |L(A)-L(B)| <= C_smooth |A dif B|^{(d-p)/d}
            const int n = uniform_int(rng, 0, opt.max_n);
            PointSet a = sample_uniform(rng, n, opt.dim);
            const int del = uniform_int(rng, 0, std::min(4, n));
            const int ins = uniform_int(rng, 0, 4 - del);
            std::vector<int> keep(n);
            for (int i = 0; i < n; ++i) keep[i] = i;
            for (int i = 0; i < del; ++i) {
              const int j = uniform_int(rng, i, n - 1);
              std::swap(keep[i], keep[j]);
            }
            PointSet b(opt.dim);
            for (int i = del; i < n; ++i) b.push(a.at(keep[i]));
            PointSet extra = sample_uniform(rng, ins, opt.dim);
            for (int i = 0; i < ins; ++i) b.push(extra.at(i));
            const double diff = std::abs(plain_value(f, a, unit, p) -
                                         plain_value(f, b, unit, p));
            const double c_smooth = std::pow(8.0, opt.dim) * std::pow(opt.dim, 0.5 * p);
            const double k = del + ins;
            const double bound =
                k == 0 ? 0.0
                       : c_smooth * std::pow(k, (opt.dim - p) / opt.dim);
            track.record(bound + kTol - diff);
            break;
          }
          case 3: {  // subadditivity over the 2^d half-cells, additive constant
            const int n = uniform_int(rng, 0, opt.max_n);
            PointSet ps = sample_uniform(rng, n, opt.dim);
            const double whole = plain_value(f, ps, unit, p);
            double parts = 0.0;
            const std::vector<PointSet> cells = split_into_cells(ps, unit, 2);
            for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci)
              parts += plain_value(f, cells[ci], cell_box(unit, 2, ci), p);
            const double c_sub =
                std::pow(2.0, opt.dim) * std::pow(2.0 * std::sqrt(opt.dim), p);
            track.record(parts + c_sub + kTol - whole);
            break;
          }
          case 4: {  // growth bound
            const int n = uniform_int(rng, 0, opt.max_n);
            PointSet ps = sample_uniform(rng, n, opt.dim);
            const GrowthCheck g = growth_bound_check(ps, unit, p, f);
            track.record(g.bound + kTol - g.value);
            break;
          }
        }
      }
      report.total_checks += row.checks;
      report.total_violations += row.violations;
      report.results.push_back(std::move(row));
    }
  }
  return report;
}

DualPropertyReport run_dual_properties(uint64_t seed, const DualPropertyOptions& opt) {
  if (opt.checks < 1) throw UsageError("dual properties: need at least one check");
  DualPropertyReport report;
  MarginTracker track{nullptr};
  track.dual = &report;
  const Box unit = unit_box(opt.dim);
  const SeedSpec spec{seed};
  // (p, factor) combinations that are superadditive: the half-price
  // construction at every p, the full-price one only from p = 1 up.
  const std::pair<double, BoundaryFactor> combos[] = {
      {0.5, BoundaryFactor::Half}, {1.0, BoundaryFactor::Full},
      {1.5, BoundaryFactor::Full}, {1.0, BoundaryFactor::Half},
      {1.5, BoundaryFactor::Half}};
  const Functional fs[] = {Functional::MST, Functional::MM, Functional::TSP};

  Rng rng = make_stream(spec, 0xD0, 1);
  for (long c = 0; c < opt.checks; ++c) {
    const auto [p, factor] = combos[c % 5];
    for (Functional f : fs) {
      const int max_n = f == Functional::TSP ? opt.max_n_tsp : opt.max_n;
      const int n = uniform_int(rng, 0, max_n);
      PointSet ps = sample_uniform(rng, n, opt.dim);

      const double plain = plain_value(f, ps, unit, p);
      const double dual = dual_value(f, ps, unit, p, factor);
      ++report.domination_checks;
      if (dual > plain + kTol) ++report.domination_violations;
      track.record(plain + kTol - dual);

      double parts = 0.0;
      const std::vector<PointSet> cells = split_into_cells(ps, unit, 2);
      for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci)
        parts += dual_value(f, cells[ci], cell_box(unit, 2, ci), p, factor);
      const double margin = dual - parts;
      if (f == Functional::TSP) {
        ++report.tsp_slack_checks;
        const double slack = 4.0 * std::pow(2.0 * std::sqrt(opt.dim), p) *
                             std::pow(2.0, opt.dim - p);
        if (margin + slack < -kTol) ++report.tsp_slack_violations;
        if (margin < -kTol) ++report.tsp_zero_slack_failures;
        track.record(margin + slack);
      } else {
        ++report.superadd_checks;
        if (margin < -kTol) ++report.superadd_violations;
        track.record(margin + kTol);
      }
    }
  }
  return report;
}

std::string format_axiom_report(const AxiomReport& report) {
  std::ostringstream out;
  for (const AxiomResult& r : report.results) {
    out << "axiom=" << r.axiom << " functional=" << to_string(r.functional)
        << " checks=" << r.checks << " violations=" << r.violations
        << " worst_margin=" << format_double(r.worst_margin) << "\n";
  }
  out << "total_checks=" << report.total_checks
      << " total_violations=" << report.total_violations << "\n";
  out << "RESULT " << (report.ok() ? "pass" : "FAIL") << "\n";
  return out.str();
}

std::string format_dual_report(const DualPropertyReport& report) {
  std::ostringstream out;
  out << "domination checks=" << report.domination_checks
      << " violations=" << report.domination_violations << "\n";
  out << "superadditivity checks=" << report.superadd_checks
      << " violations=" << report.superadd_violations << "\n";
  out << "tsp_slack checks=" << report.tsp_slack_checks
      << " violations=" << report.tsp_slack_violations
      << " zero_slack_failures=" << report.tsp_zero_slack_failures << "\n";
  out << "worst_margin=" << format_double(report.worst_margin) << "\n";
  out << "RESULT " << (report.ok() ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace pwe
