#pragma once

#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace pwe {

enum class Functional { MM, MST, TSP };
enum class Variant { Plain, Dual };
enum class Mode { Exact, Heuristic };
enum class BoundaryFactor { Auto, Full, Half };

const char* to_string(Functional f);
const char* to_string(Variant v);

// Edges incident to the box boundary use this sentinel as second endpoint.
constexpr int kBoundaryVertex = -1;

struct SolveLimits {
  int mm_exact = 512;       // exact matching (plain and dual)
  int tsp_exact = 16;       // exact tour
  int tsp_dual_exact = 12;  // exact boundary-anchored tour decomposition
};

struct Instance {
  PointSet points;
  Box box;
  double p = 1.0;
  Functional functional = Functional::MST;
  Variant variant = Variant::Plain;
  Mode mode = Mode::Exact;
  BoundaryFactor factor = BoundaryFactor::Auto;
  SolveLimits limits;
};

struct Edge {
  int a = 0;
  int b = 0;
};

struct Solution {
  double value = 0.0;
  std::vector<Edge> edges;
  bool certified = true;
  Functional functional = Functional::MST;
  Variant variant = Variant::Plain;
  int boundary_degree = 0;     // N_B: distinct points with a boundary edge
  double boundary_cost = 0.0;  // L_B: total cost of boundary edges
};

// Boundary edges cost factor * |x - b|^p; the factor is 1/2 below p = 1 and
// 1 from p = 1 on, unless explicitly overridden.
double effective_factor(double p, BoundaryFactor mode);

// Validates the instance (points inside box, p > 0, limits) and dispatches.
Solution solve(const Instance& instance);

// Plain functionals.
Solution solve_mst(const PointSet& ps, const Box& box, double p);
Solution solve_mm_exact(const PointSet& ps, const Box& box, double p, int limit);
Solution solve_tsp_exact(const PointSet& ps, const Box& box, double p, int limit);
Solution solve_mm_greedy(const PointSet& ps, const Box& box, double p);
Solution solve_tsp_two_opt(const PointSet& ps, const Box& box, double p);

struct GrowthCheck {
  double value = 0.0;
  double bound = 0.0;
  bool ok = true;
};

// value <= 4 (2 sqrt d)^p (x2 for tours) * max(n^{(d-p)/d}, 1) * side^p.
double growth_constant(Functional f, int dim, double p);
GrowthCheck growth_bound_check(const PointSet& ps, const Box& box, double p, Functional f);

// Internal consistency: value recomputable from the edge list, structural
// edge counts, diagnostics totals.  Runs after every solve; throws
// InternalError on mismatch.
void verify_solution(const Instance& instance, const Solution& sol);

}  // namespace pwe
