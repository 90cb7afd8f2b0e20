#include "core/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/dual.hpp"
#include "core/matching.hpp"

namespace pwe {

const char* to_string(Functional f) {
  switch (f) {
    case Functional::MM: return "mm";
    case Functional::MST: return "mst";
    case Functional::TSP: return "tsp";
  }
  return "?";
}

const char* to_string(Variant v) {
  return v == Variant::Plain ? "plain" : "dual";
}

double effective_factor(double p, BoundaryFactor mode) {
  switch (mode) {
    case BoundaryFactor::Full: return 1.0;
    case BoundaryFactor::Half: return 0.5;
    case BoundaryFactor::Auto: break;
  }
  return p < 1.0 ? 0.5 : 1.0;
}

namespace {

void check_instance(const Instance& inst) {
  if (!(inst.p > 0.0)) throw UsageError("solve: power must be > 0");
  if (inst.box.dim() < 1) throw UsageError("solve: box dimension must be >= 1");
  if (inst.points.size() > 0 && inst.points.dim != inst.box.dim())
    throw UsageError("solve: point/box dimension mismatch");
  if (!(inst.box.side > 0.0)) throw UsageError("solve: box side must be > 0");
  for (int i = 0; i < inst.points.size(); ++i)
    boundary_dist(inst.points.at(i), inst.box);  // throws if outside
}

}  // namespace

Solution solve(const Instance& inst) {
  check_instance(inst);
  Solution sol;
  if (inst.variant == Variant::Plain) {
    switch (inst.functional) {
      case Functional::MST:
        if (inst.mode == Mode::Heuristic)
          throw UsageError("solve: no heuristic tree mode; exact is polynomial at any size");
        sol = solve_mst(inst.points, inst.box, inst.p);
        break;
      case Functional::MM:
        sol = inst.mode == Mode::Exact
                  ? solve_mm_exact(inst.points, inst.box, inst.p, inst.limits.mm_exact)
                  : solve_mm_greedy(inst.points, inst.box, inst.p);
        break;
      case Functional::TSP:
        sol = inst.mode == Mode::Exact
                  ? solve_tsp_exact(inst.points, inst.box, inst.p, inst.limits.tsp_exact)
                  : solve_tsp_two_opt(inst.points, inst.box, inst.p);
        break;
    }
  } else {
    if (inst.mode == Mode::Heuristic)
      throw UsageError("solve: dual variants are exact-only");
    const double factor = effective_factor(inst.p, inst.factor);
    switch (inst.functional) {
      case Functional::MST:
        sol = solve_mst_dual(inst.points, inst.box, inst.p, factor);
        break;
      case Functional::MM:
        sol = solve_mm_dual(inst.points, inst.box, inst.p, factor, inst.limits.mm_exact);
        break;
      case Functional::TSP:
        sol = solve_tsp_dual(inst.points, inst.box, inst.p, factor,
                             inst.limits.tsp_dual_exact, inst.limits.tsp_exact);
        break;
    }
  }
  verify_solution(inst, sol);
  return sol;
}

// ---------------------------------------------------------------------------
// Minimal spanning tree: Prim on squared distances.  The optimal edge set
// does not depend on p (the greedy order is invariant under the monotone map
// t -> t^p), so costs are powered only when summing.
// ---------------------------------------------------------------------------

Solution solve_mst(const PointSet& ps, const Box& box, double p) {
  (void)box;
  const int n = ps.size();
  Solution sol;
  sol.functional = Functional::MST;
  if (n <= 1) return sol;

  const int d = ps.dim;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> link(n, 0);
  std::vector<char> used(n, 0);
  used[0] = 1;
  for (int j = 1; j < n; ++j) best[j] = squared_dist(ps.at(0), ps.at(j), d);

  for (int it = 1; it < n; ++it) {
    int v = -1;
    for (int j = 0; j < n; ++j)
      if (!used[j] && (v < 0 || best[j] < best[v])) v = j;
    used[v] = 1;
    sol.edges.push_back({link[v], v});
    for (int j = 0; j < n; ++j)
      if (!used[j]) {
        const double d2 = squared_dist(ps.at(v), ps.at(j), d);
        if (d2 < best[j]) {
          best[j] = d2;
          link[j] = v;
        }
      }
  }
  double value = 0.0;
  for (const Edge& e : sol.edges) value += edge_cost(ps.at(e.a), ps.at(e.b), d, p);
  sol.value = value;
  return sol;
}

// ---------------------------------------------------------------------------
// Minimal matching
// ---------------------------------------------------------------------------

Solution solve_mm_exact(const PointSet& ps, const Box& box, double p, int limit) {
  (void)box;
  const int n = ps.size();
  if (n > limit)
    throw SizeError("matching instance exceeds the exact limit (" + std::to_string(limit) +
                    "); use heuristic mode");
  Solution sol;
  sol.functional = Functional::MM;
  if (n <= 1) return sol;

  const int d = ps.dim;
  const int m = n + (n % 2);  // odd n gets a zero-cost virtual vertex
  std::vector<double> cost(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = edge_cost(ps.at(i), ps.at(j), d, p);
      cost[static_cast<size_t>(i) * m + j] = c;
      cost[static_cast<size_t>(j) * m + i] = c;
    }
  const std::vector<int> mate = min_cost_perfect_matching(m, cost);
  double value = 0.0;
  for (int i = 0; i < n; ++i)
    if (mate[i] > i && mate[i] < n) {
      sol.edges.push_back({i, mate[i]});
      value += edge_cost(ps.at(i), ps.at(mate[i]), d, p);
    }
  sol.value = value;
  return sol;
}

Solution solve_mm_greedy(const PointSet& ps, const Box& box, double p) {
  (void)box;
  const int n = ps.size();
  Solution sol;
  sol.functional = Functional::MM;
  sol.certified = false;
  if (n <= 1) return sol;

  const int d = ps.dim;
  std::vector<char> dead(n, 0);
  std::vector<int> nn(n, -1);
  std::vector<double> nd(n, 0.0);
  auto recompute = [&](int i) {
    nn[i] = -1;
    nd[i] = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (j != i && !dead[j]) {
        const double d2 = squared_dist(ps.at(i), ps.at(j), d);
        if (d2 < nd[i]) {
          nd[i] = d2;
          nn[i] = j;
        }
      }
  };
  for (int i = 0; i < n; ++i) recompute(i);

  int alive = n;
  double value = 0.0;
  while (alive >= 2) {
    int bi = -1;
    for (int i = 0; i < n; ++i)
      if (!dead[i] && (bi < 0 || nd[i] < nd[bi])) bi = i;
    const int bj = nn[bi];
    sol.edges.push_back({std::min(bi, bj), std::max(bi, bj)});
    value += edge_cost(ps.at(bi), ps.at(bj), d, p);
    dead[bi] = dead[bj] = 1;
    alive -= 2;
    if (alive >= 2)
      for (int i = 0; i < n; ++i)
        if (!dead[i] && (nn[i] == bi || nn[i] == bj)) recompute(i);
  }
  sol.value = value;
  return sol;
}

// ---------------------------------------------------------------------------
// Travelling salesman
// ---------------------------------------------------------------------------

Solution solve_tsp_exact(const PointSet& ps, const Box& box, double p, int limit) {
  (void)box;
  const int n = ps.size();
  if (n > limit)
    throw SizeError("tour instance exceeds the exact limit (" + std::to_string(limit) +
                    "); use heuristic mode");
  Solution sol;
  sol.functional = Functional::TSP;
  if (n <= 1) return sol;

  const int d = ps.dim;
  std::vector<double> c(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c[static_cast<size_t>(i) * n + j] = edge_cost(ps.at(i), ps.at(j), d, p);

  // Held-Karp over subsets containing city 0
  const int full = 1 << n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(static_cast<size_t>(full) * n, inf);
  std::vector<int8_t> par(static_cast<size_t>(full) * n, -1);
  dp[1 * n + 0] = 0.0;
  for (int mask = 1; mask < full; mask += 2) {
    for (int j = 0; j < n; ++j) {
      const double cur = dp[static_cast<size_t>(mask) * n + j];
      if (cur == inf || !(mask >> j & 1)) continue;
      for (int k = 1; k < n; ++k) {
        if (mask >> k & 1) continue;
        const int nmask = mask | (1 << k);
        const double cand = cur + c[static_cast<size_t>(j) * n + k];
        if (cand < dp[static_cast<size_t>(nmask) * n + k]) {
          dp[static_cast<size_t>(nmask) * n + k] = cand;
          par[static_cast<size_t>(nmask) * n + k] = static_cast<int8_t>(j);
        }
      }
    }
  }
  double best = inf;
  int bj = 0;
  for (int j = 1; j < n; ++j) {
    const double cand = dp[static_cast<size_t>(full - 1) * n + j] + c[static_cast<size_t>(j) * n + 0];
    if (cand < best) {
      best = cand;
      bj = j;
    }
  }
  std::vector<int> order;
  int mask = full - 1, j = bj;
  while (j >= 0) {
    order.push_back(j);
    const int pj = par[static_cast<size_t>(mask) * n + j];
    mask ^= 1 << j;
    j = pj;
  }
  std::reverse(order.begin(), order.end());  // starts at 0
  for (int i = 0; i + 1 < n; ++i) sol.edges.push_back({order[i], order[i + 1]});
  sol.edges.push_back({order[n - 1], order[0]});
  sol.value = best;
  return sol;
}

namespace {

std::vector<int> nearest_neighbor_order(const PointSet& ps) {
  const int n = ps.size();
  const int d = ps.dim;
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> used(n, 0);
  int cur = 0;
  used[0] = 1;
  order.push_back(0);
  for (int it = 1; it < n; ++it) {
    int nxt = -1;
    double bd2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (!used[j]) {
        const double d2 = squared_dist(ps.at(cur), ps.at(j), d);
        if (d2 < bd2) {
          bd2 = d2;
          nxt = j;
        }
      }
    used[nxt] = 1;
    order.push_back(nxt);
    cur = nxt;
  }
  return order;
}

}  // namespace

Solution solve_tsp_two_opt(const PointSet& ps, const Box& box, double p) {
  (void)box;
  const int n = ps.size();
  Solution sol;
  sol.functional = Functional::TSP;
  sol.certified = false;
  if (n <= 1) return sol;

  const int d = ps.dim;
  std::vector<int> tour = nearest_neighbor_order(ps);
  auto cost = [&](int i, int j) { return edge_cost(ps.at(i), ps.at(j), d, p); };

  if (n >= 4) {
    bool improved = true;
    int sweeps = 0;
    while (improved && ++sweeps <= 200) {
      improved = false;
      for (int i = 0; i + 1 < n; ++i) {
        for (int k = i + 2; k < n; ++k) {
          if (i == 0 && k == n - 1) continue;  // same edge pair
          const int a = tour[i], b = tour[i + 1];
          const int e = tour[k], f = tour[(k + 1) % n];
          const double delta = cost(a, e) + cost(b, f) - cost(a, b) - cost(e, f);
          if (delta < -1e-12) {
            std::reverse(tour.begin() + i + 1, tour.begin() + k + 1);
            improved = true;
          }
        }
      }
    }
  }
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    const int a = tour[i], b = tour[(i + 1) % n];
    sol.edges.push_back({a, b});
    value += cost(a, b);
  }
  sol.value = value;
  return sol;
}

// ---------------------------------------------------------------------------
// Growth bound
// ---------------------------------------------------------------------------

double growth_constant(Functional f, int dim, double p) {
  const double base = 4.0 * std::pow(2.0 * std::sqrt(static_cast<double>(dim)), p);
  return f == Functional::TSP ? 2.0 * base : base;
}

GrowthCheck growth_bound_check(const PointSet& ps, const Box& box, double p, Functional f) {
  Instance inst;
  inst.points = ps;
  inst.box = box;
  inst.p = p;
  inst.functional = f;
  if (f == Functional::MM && ps.size() > inst.limits.mm_exact) inst.mode = Mode::Heuristic;
  if (f == Functional::TSP && ps.size() > inst.limits.tsp_exact) inst.mode = Mode::Heuristic;
  const Solution sol = solve(inst);

  const int n = ps.size();
  const double d = static_cast<double>(box.dim());
  const double shape = std::max(std::pow(static_cast<double>(n), (d - p) / d), 1.0);
  GrowthCheck out;
  out.value = sol.value;
  out.bound = growth_constant(f, box.dim(), p) * shape * std::pow(box.side, p);
  out.ok = out.value <= out.bound + 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Structural verification
// ---------------------------------------------------------------------------

void verify_solution(const Instance& inst, const Solution& sol) {
  const PointSet& ps = inst.points;
  const int n = ps.size();
  const int d = ps.dim;
  const double factor = effective_factor(inst.p, inst.factor);

  double value = 0.0;
  double boundary_cost = 0.0;
  int boundary_edges = 0;
  std::vector<char> attached(std::max(n, 1), 0);
  for (const Edge& e : sol.edges) {
    if (e.a < 0 || e.a >= n || e.b < kBoundaryVertex || e.b >= n)
      throw InternalError("solution: edge endpoint out of range");
    if (e.b == kBoundaryVertex) {
      const double c = factor * std::pow(boundary_dist(ps.at(e.a), inst.box), inst.p);
      value += c;
      boundary_cost += c;
      ++boundary_edges;
      attached[e.a] = 1;
    } else {
      value += edge_cost(ps.at(e.a), ps.at(e.b), d, inst.p);
    }
  }
  const double tol = 1e-9 * (1.0 + std::abs(sol.value));
  if (std::abs(value - sol.value) > tol)
    throw InternalError("solution: value does not match edge list");

  int attached_count = 0;
  for (int i = 0; i < n; ++i) attached_count += attached[i];
  if (sol.variant == Variant::Dual) {
    if (attached_count != sol.boundary_degree)
      throw InternalError("solution: boundary degree mismatch");
    if (std::abs(boundary_cost - sol.boundary_cost) > tol)
      throw InternalError("solution: boundary cost mismatch");
  } else if (boundary_edges != 0) {
    throw InternalError("solution: plain variant with boundary edges");
  }

  const size_t edges = sol.edges.size();
  const size_t plain_edges = edges - boundary_edges;
  switch (sol.functional) {
    case Functional::MST:
      if (sol.variant == Variant::Plain) {
        if (edges != static_cast<size_t>(std::max(n - 1, 0)))
          throw InternalError("solution: tree edge count");
      } else {
        const size_t expect = boundary_edges > 0 ? n : std::max(n - 1, 0);
        if (edges != expect) throw InternalError("solution: dual tree edge count");
      }
      break;
    case Functional::MM: {
      if (2 * plain_edges + boundary_edges > static_cast<size_t>(n))
        throw InternalError("solution: matching covers too many points");
      const size_t uncovered = n - 2 * plain_edges - boundary_edges;
      if (sol.variant == Variant::Plain) {
        if (plain_edges != static_cast<size_t>(n / 2))
          throw InternalError("solution: matching edge count");
      } else if (uncovered > 1) {
        throw InternalError("solution: dual matching leaves two points uncovered");
      }
      break;
    }
    case Functional::TSP:
      if (sol.variant == Variant::Plain) {
        if (edges != static_cast<size_t>(n >= 2 ? n : 0))
          throw InternalError("solution: tour edge count");
      } else {
        if (boundary_edges % 2 != 0)
          throw InternalError("solution: dual tour attachment parity");
        const size_t parts = boundary_edges / 2;
        const size_t expect = parts == 0 ? (n >= 2 ? n : 0) : n - parts + 2 * parts;
        if (edges != expect) throw InternalError("solution: dual tour edge count");
      }
      break;
  }
}

}  // namespace pwe
