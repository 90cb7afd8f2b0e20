#include "core/dual.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "core/common.hpp"
#include "core/matching.hpp"

namespace pwe {

namespace {

double attach_cost(const PointSet& ps, int i, const Box& box, double p, double factor) {
  const double bd = boundary_dist(ps.at(i), box);
  return factor * std::pow(bd, p);
}

Solution make_dual(Functional f, double value) {
  Solution sol;
  sol.functional = f;
  sol.variant = Variant::Dual;
  sol.certified = true;
  sol.value = value;
  return sol;
}

}  // namespace

Solution solve_mst_dual(const PointSet& ps, const Box& box, double p, double factor) {
  const int n = static_cast<int>(ps.size());
  Solution plain = solve_mst(ps, box, p);
  if (n == 0) {
    Solution sol = make_dual(Functional::MST, 0.0);
    return sol;
  }

  // Prim over n+1 nodes; node n is the virtual boundary vertex and serves as
  // the start, so every attachment edge is costed directly.
  const int vb = n;
  std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n + 1, vb);
  std::vector<char> used(n + 1, 0);
  used[vb] = 1;
  for (int i = 0; i < n; ++i) best[i] = attach_cost(ps, i, box, p, factor);

  double aug_value = 0.0;
  std::vector<Edge> aug_edges;
  aug_edges.reserve(n);
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!used[i] && (u < 0 || best[i] < best[u])) u = i;
    used[u] = 1;
    aug_value += best[u];
    aug_edges.push_back({u, parent[u] == vb ? kBoundaryVertex : parent[u]});
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double c = edge_cost(ps.at(u), ps.at(i), ps.dim, p);
      if (c < best[i]) {
        best[i] = c;
        parent[i] = u;
      }
    }
  }

  if (!(aug_value < plain.value)) {
    plain.variant = Variant::Dual;
    return plain;
  }
  Solution sol = make_dual(Functional::MST, aug_value);
  sol.edges = std::move(aug_edges);
  for (const Edge& e : sol.edges) {
    if (e.b == kBoundaryVertex) {
      sol.boundary_degree += 1;
      sol.boundary_cost += attach_cost(ps, e.a, box, p, factor);
    }
  }
  return sol;
}

Solution solve_mm_dual(const PointSet& ps, const Box& box, double p, double factor,
                       int limit) {
  const int n = static_cast<int>(ps.size());
  if (n > limit) throw SizeError("matching dual solver limited to n <= " + std::to_string(limit));
  if (n == 0) return make_dual(Functional::MM, 0.0);

  // Vertices: samples 0..n-1, shadow of i at n+i, ghost g, ghost shadow h.
  // Sample-sample edges cost |x-y|^p, sample-shadow(self) edges carry the
  // boundary option, shadow-shadow and all ghost-pair edges are free. A
  // point matched to g stays uncovered; g matched to h means full coverage.
  // Any other combination is blocked by a prohibitive cost.
  const int g = 2 * n;
  const int h = 2 * n + 1;
  const int m = 2 * n + 2;
  std::vector<double> attach(n);
  double max_real = 0.0;
  for (int i = 0; i < n; ++i) {
    attach[i] = attach_cost(ps, i, box, p, factor);
    max_real = std::max(max_real, attach[i]);
  }
  std::vector<double> cost(static_cast<size_t>(m) * m, 0.0);
  auto at = [&](int a, int b) -> double& { return cost[static_cast<size_t>(a) * m + b]; };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = edge_cost(ps.at(i), ps.at(j), ps.dim, p);
      at(i, j) = at(j, i) = c;
      max_real = std::max(max_real, c);
    }
  const double big = (n + 3) * (max_real + 1.0);
  for (int i = 0; i < n; ++i) {
    at(i, n + i) = at(n + i, i) = attach[i];
    at(i, h) = at(h, i) = big;             // ghost shadow never covers a sample
    at(g, n + i) = at(n + i, g) = big;     // ghost never covers a shadow
    for (int j = 0; j < n; ++j)
      if (j != i) at(i, n + j) = at(n + j, i) = big;  // only its own shadow
  }

  const std::vector<int> mate = min_cost_perfect_matching(m, cost);
  Solution sol = make_dual(Functional::MM, 0.0);
  for (int i = 0; i < n; ++i) {
    const int mi = mate[i];
    if (mi == g) continue;  // uncovered
    if (mi == n + i) {
      sol.edges.push_back({i, kBoundaryVertex});
      sol.value += attach[i];
      sol.boundary_degree += 1;
      sol.boundary_cost += attach[i];
    } else if (mi < n) {
      if (mi > i) {
        sol.edges.push_back({i, mi});
        sol.value += at(i, mi);
      }
    } else {
      throw InternalError("mm dual: matching used a blocked edge");
    }
  }
  return sol;
}

Solution solve_tsp_dual(const PointSet& ps, const Box& box, double p, double factor,
                        int dual_limit, int tsp_limit) {
  const int n = static_cast<int>(ps.size());
  if (n > dual_limit)
    throw SizeError("tour dual solver limited to n <= " + std::to_string(dual_limit));
  Solution plain = solve_tsp_exact(ps, box, p, tsp_limit);
  if (n == 0) return make_dual(Functional::TSP, 0.0);

  std::vector<double> ac(n);
  for (int i = 0; i < n; ++i) ac[i] = attach_cost(ps, i, box, p, factor);
  std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      w[static_cast<size_t>(i) * n + j] = w[static_cast<size_t>(j) * n + i] =
          edge_cost(ps.at(i), ps.at(j), ps.dim, p);

  const int full = 1 << n;
  const double inf = std::numeric_limits<double>::infinity();
  // hp[T][j]: cheapest open path covering T, ending at j, with the start
  // already paying its boundary attachment.
  std::vector<double> hp(static_cast<size_t>(full) * n, inf);
  std::vector<int8_t> hpar(static_cast<size_t>(full) * n, -2);
  for (int i = 0; i < n; ++i) hp[static_cast<size_t>(1 << i) * n + i] = ac[i];
  for (int T = 1; T < full; ++T) {
    for (int j = 0; j < n; ++j) {
      if (!(T & (1 << j))) continue;
      const double cur = hp[static_cast<size_t>(T) * n + j];
      if (cur == inf) continue;
      for (int k = 0; k < n; ++k) {
        if (T & (1 << k)) continue;
        const int T2 = T | (1 << k);
        double cand = cur + w[static_cast<size_t>(j) * n + k];
        if (cand < hp[static_cast<size_t>(T2) * n + k]) {
          hp[static_cast<size_t>(T2) * n + k] = cand;
          hpar[static_cast<size_t>(T2) * n + k] = static_cast<int8_t>(j);
        }
      }
    }
  }

  // part[T]: best boundary-anchored path over T (both endpoints attached).
  std::vector<double> part(full, inf);
  std::vector<int8_t> pend(full, -1);
  for (int T = 1; T < full; ++T)
    for (int j = 0; j < n; ++j) {
      if (!(T & (1 << j))) continue;
      const double cand = hp[static_cast<size_t>(T) * n + j] + ac[j];
      if (cand < part[T]) {
        part[T] = cand;
        pend[T] = static_cast<int8_t>(j);
      }
    }

  // cover[S]: best partition of S into anchored paths; the block containing
  // the lowest set bit is enumerated explicitly to avoid double counting.
  std::vector<double> cover(full, inf);
  std::vector<int> csub(full, 0);
  cover[0] = 0.0;
  for (int S = 1; S < full; ++S) {
    const int low = S & -S;
    for (int T = S; T > 0; T = (T - 1) & S) {
      if (!(T & low)) continue;
      const double cand = part[T] + cover[S ^ T];
      if (cand < cover[S]) {
        cover[S] = cand;
        csub[S] = T;
      }
    }
  }

  if (!(cover[full - 1] < plain.value)) {
    plain.variant = Variant::Dual;
    return plain;
  }

  Solution sol = make_dual(Functional::TSP, cover[full - 1]);
  int S = full - 1;
  while (S) {
    const int T = csub[S];
    int j = pend[T];
    sol.edges.push_back({j, kBoundaryVertex});
    sol.boundary_cost += ac[j];
    int rest = T;
    while (hpar[static_cast<size_t>(rest) * n + j] != -2) {
      const int prev = hpar[static_cast<size_t>(rest) * n + j];
      sol.edges.push_back({std::min(j, prev), std::max(j, prev)});
      rest ^= 1 << j;
      j = prev;
    }
    sol.edges.push_back({j, kBoundaryVertex});
    sol.boundary_cost += ac[j];
    S ^= T;
  }
  std::vector<char> attached(n, 0);
  for (const Edge& e : sol.edges)
    if (e.b == kBoundaryVertex) attached[e.a] = 1;
  for (int i = 0; i < n; ++i) sol.boundary_degree += attached[i];
  return sol;
}

BoundaryDiagnostics boundary_diagnostics(const Solution& sol) {
  if (sol.variant != Variant::Dual)
    throw UsageError("boundary_diagnostics: plain solutions carry no boundary data");
  return {sol.boundary_degree, sol.boundary_cost};
}

}  // namespace pwe
