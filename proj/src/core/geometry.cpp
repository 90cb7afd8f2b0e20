#include "core/geometry.hpp"

#include <algorithm>
#include <map>

namespace pwe {

namespace {
constexpr double kInsideTol = 1e-12;
}

Box unit_box(int dim) {
  if (dim < 1) throw UsageError("unit_box: dimension must be >= 1");
  Box b;
  b.corner.assign(dim, 0.0);
  b.side = 1.0;
  return b;
}

PointSet PointSet::prefix(int n) const {
  if (n < 0 || n > size()) throw UsageError("PointSet::prefix: bad length");
  PointSet out(dim);
  out.coords.assign(coords.begin(), coords.begin() + static_cast<size_t>(n) * dim);
  return out;
}

PointSet PointSet::subset(const std::vector<int>& idx) const {
  PointSet out(dim);
  for (int i : idx) {
    if (i < 0 || i >= size()) throw UsageError("PointSet::subset: index out of range");
    out.push(at(i));
  }
  return out;
}

double squared_dist(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

double edge_cost(const double* a, const double* b, int dim, double p) {
  if (!(p > 0.0)) throw UsageError("edge_cost: power must be > 0");
  const double d2 = squared_dist(a, b, dim);
  if (d2 == 0.0) return 0.0;
  // common exponents avoid pow; these paths agree with it to 1 ulp
  if (p == 1.0) return std::sqrt(d2);
  if (p == 2.0) return d2;
  if (p == 0.5) return std::sqrt(std::sqrt(d2));
  return std::pow(d2, 0.5 * p);
}

double edge_cost(const Point& a, const Point& b, double p) {
  if (a.size() != b.size() || a.empty()) throw UsageError("edge_cost: dimension mismatch");
  return edge_cost(a.data(), b.data(), static_cast<int>(a.size()), p);
}

double boundary_dist(const double* a, const Box& box) {
  double best = box.side;
  for (int k = 0; k < box.dim(); ++k) {
    const double below = a[k] - box.lo(k);
    const double above = box.hi(k) - a[k];
    if (below < -kInsideTol || above < -kInsideTol)
      throw UsageError("boundary_dist: point lies outside the box");
    best = std::min(best, std::min(below, above));
  }
  return std::max(best, 0.0);
}

double boundary_dist(const Point& a, const Box& box) {
  if (static_cast<int>(a.size()) != box.dim())
    throw UsageError("boundary_dist: dimension mismatch");
  return boundary_dist(a.data(), box);
}

PointSet affine_image(const PointSet& ps, const Point& y, double t) {
  if (static_cast<int>(y.size()) != ps.dim)
    throw UsageError("affine_image: shift has wrong dimension");
  if (!(t > 0.0)) throw UsageError("affine_image: scale must be > 0");
  PointSet out(ps.dim);
  out.coords.resize(ps.coords.size());
  const int d = ps.dim;
  for (int i = 0; i < ps.size(); ++i)
    for (int k = 0; k < d; ++k) out.at(i)[k] = y[k] + t * ps.at(i)[k];
  return out;
}

Box affine_image(const Box& box, const Point& y, double t) {
  if (static_cast<int>(y.size()) != box.dim())
    throw UsageError("affine_image: shift has wrong dimension");
  if (!(t > 0.0)) throw UsageError("affine_image: scale must be > 0");
  Box out;
  out.corner.resize(box.dim());
  for (int k = 0; k < box.dim(); ++k) out.corner[k] = y[k] + t * box.lo(k);
  out.side = t * box.side;
  return out;
}

int sym_diff_count(const PointSet& a, const PointSet& b) {
  if (a.dim != b.dim && a.size() > 0 && b.size() > 0)
    throw UsageError("sym_diff_count: dimension mismatch");
  std::map<std::vector<double>, int> mult;
  for (int i = 0; i < a.size(); ++i) mult[a.point(i)] += 1;
  for (int i = 0; i < b.size(); ++i) mult[b.point(i)] -= 1;
  int total = 0;
  for (const auto& [_, c] : mult) total += std::abs(c);
  return total;
}

int cell_index(const double* a, const Box& box, int m) {
  if (m < 1) throw UsageError("cell_index: subdivision level must be >= 1");
  int idx = 0;
  for (int k = 0; k < box.dim(); ++k) {
    double rel = (a[k] - box.lo(k)) / box.side;
    int c = static_cast<int>(std::floor(rel * m));
    c = std::clamp(c, 0, m - 1);
    idx = idx * m + c;
  }
  return idx;
}

Box cell_box(const Box& box, int m, int cell) {
  const int d = box.dim();
  Box out;
  out.corner.resize(d);
  out.side = box.side / m;
  for (int k = d - 1; k >= 0; --k) {
    out.corner[k] = box.lo(k) + (cell % m) * out.side;
    cell /= m;
  }
  return out;
}

std::vector<PointSet> split_into_cells(const PointSet& ps, const Box& box, int m) {
  int cells = 1;
  for (int k = 0; k < box.dim(); ++k) {
    if (cells > (1 << 28) / m) throw UsageError("split_into_cells: too many cells");
    cells *= m;
  }
  std::vector<PointSet> out(cells, PointSet(ps.dim));
  for (int i = 0; i < ps.size(); ++i) out[cell_index(ps.at(i), box, m)].push(ps.at(i));
  return out;
}

}  // namespace pwe
