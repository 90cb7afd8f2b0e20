#pragma once

#include "core/geometry.hpp"
#include "core/solvers.hpp"

namespace pwe {

// Boundary-rooted variants. Attachment edges connect a sample point to the
// nearest face of the box and cost factor * boundary_dist^p; they appear in
// Solution::edges with kBoundaryVertex as second endpoint.

// min(plain tree, spanning tree of the graph augmented with one virtual
// boundary vertex). Ties go to the plain tree.
Solution solve_mst_dual(const PointSet& ps, const Box& box, double p, double factor);

// Each point pairs with another point, attaches to the boundary, or (at most
// one point overall) stays uncovered. Reduced to a minimum-weight perfect
// matching on 2n+2 vertices: a shadow per point carries its boundary option,
// shadow-shadow edges are free, and a free ghost pair absorbs the parity
// slack so that one point may stay uncovered regardless of n.
Solution solve_mm_dual(const PointSet& ps, const Box& box, double p, double factor,
                       int limit);

// min(plain tour, best partition into open paths whose two endpoints attach
// to the boundary). Subset DP over boundary-anchored paths.
Solution solve_tsp_dual(const PointSet& ps, const Box& box, double p, double factor,
                        int dual_limit, int tsp_limit);

struct BoundaryDiagnostics {
  int n_b = 0;       // distinct points with at least one boundary edge
  double l_b = 0.0;  // total boundary-edge cost
};

// Only defined for dual solutions; plain variants have no boundary edges.
BoundaryDiagnostics boundary_diagnostics(const Solution& sol);

}  // namespace pwe
