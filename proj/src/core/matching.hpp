#pragma once

#include <vector>

namespace pwe {

// Minimum-cost perfect matching on a complete graph with n vertices (n even).
// cost is row-major n*n, symmetric, nonnegative.  Returns mate[i] = partner.
//
// Costs are scaled to 48-bit integers internally, so the matching is optimal
// for the rounded costs; the induced error on the reported (true-cost) value
// is below n * 2^-40 * max_cost, far inside the 1e-9 test tolerances.
std::vector<int> min_cost_perfect_matching(int n, const std::vector<double>& cost);

}  // namespace pwe
