#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace pwe {

using Point = std::vector<double>;

// Axis-aligned cube: corner + side length.  All functionals are defined
// relative to such a box, the unit box [0,1]^d being the default.
struct Box {
  Point corner;
  double side = 1.0;

  int dim() const { return static_cast<int>(corner.size()); }
  double lo(int k) const { return corner[k]; }
  double hi(int k) const { return corner[k] + side; }
};

Box unit_box(int dim);

// Flat row-major point storage.  Duplicate points are legal everywhere.
struct PointSet {
  int dim = 0;
  std::vector<double> coords;  // size() * dim entries

  PointSet() = default;
  explicit PointSet(int d) : dim(d) {
    if (d < 1) throw UsageError("PointSet: dimension must be >= 1");
  }

  int size() const { return dim == 0 ? 0 : static_cast<int>(coords.size()) / dim; }
  const double* at(int i) const { return coords.data() + static_cast<size_t>(i) * dim; }
  double* at(int i) { return coords.data() + static_cast<size_t>(i) * dim; }

  void push(const double* x) { coords.insert(coords.end(), x, x + dim); }
  void push(const Point& x) {
    if (static_cast<int>(x.size()) != dim) throw UsageError("PointSet: point has wrong dimension");
    push(x.data());
  }
  Point point(int i) const { return Point(at(i), at(i) + dim); }
  PointSet prefix(int n) const;
  PointSet subset(const std::vector<int>& idx) const;
};

double squared_dist(const double* a, const double* b, int dim);

// |a - b|^p.  Strictly positive p; zero exactly for coincident points.
double edge_cost(const double* a, const double* b, int dim, double p);
double edge_cost(const Point& a, const Point& b, double p);

// Distance from an interior point to the nearest face of the box.
// Precondition: the point lies in the box within tolerance 1e-12.
double boundary_dist(const double* a, const Box& box);
double boundary_dist(const Point& a, const Box& box);

// x -> y + t * x applied to every point (t > 0).
PointSet affine_image(const PointSet& ps, const Point& y, double t);
Box affine_image(const Box& box, const Point& y, double t);

// Multiset symmetric difference cardinality |A (+) B| on exact coordinates.
int sym_diff_count(const PointSet& a, const PointSet& b);

// Which of the m^d congruent subboxes contains point i.  Cells are half-open
// along each axis with the top face closed, so seam points get one owner.
int cell_index(const double* a, const Box& box, int m);
Box cell_box(const Box& box, int m, int cell);
std::vector<PointSet> split_into_cells(const PointSet& ps, const Box& box, int m);

// Text format: first line "d n", then n lines of d coordinates.
PointSet read_pointset_text(const std::string& text);
std::string write_pointset_text(const PointSet& ps);

std::string format_double(double v);  // shortest round-trip-safe decimal

}  // namespace pwe
