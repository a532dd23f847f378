#include "toric/torus_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "toric/error.hpp"

namespace toric {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

void require_nondegenerate(const Lattice2& lat) {
  const double scale = std::max(dot(lat.v1, lat.v1), dot(lat.v2, lat.v2));
  if (!(std::abs(cross(lat.v1, lat.v2)) > 1e-300) || !(std::abs(cross(lat.v1, lat.v2)) > 1e-15 * scale))
    throw Error(ErrorCode::DegenerateLattice, "basis vectors are linearly dependent");
}

}  // namespace

Lattice2 reduce(const Lattice2& lat) {
  require_nondegenerate(lat);
  Vec2 a = lat.v1, b = lat.v2;
  if (dot(a, a) > dot(b, b)) std::swap(a, b);
  for (int iter = 0; iter < 10000; ++iter) {
    const double mu = std::round(dot(a, b) / dot(a, a));
    b = b - mu * a;
    if (dot(b, b) >= dot(a, a)) break;
    std::swap(a, b);
  }
  if (dot(a, b) < 0.0) b = -1.0 * b;
  return {a, b};
}

double area(const Lattice2& lat) { return std::abs(cross(lat.v1, lat.v2)); }

double systole(const Lattice2& lat) { return norm(reduce(lat).v1); }

double second_minimum(const Lattice2& lat) { return norm(reduce(lat).v2); }

double covering_radius(const Lattice2& lat) {
  // For a reduced basis with acute angle the triangle (0, v1, v2) is
  // non-obtuse, it and its point reflection tile the plane (Delaunay), so
  // the Voronoi vertices are its circumcentres.
  const Lattice2 r = reduce(lat);
  const double a = norm(r.v1), b = norm(r.v2), c = norm(r.v2 - r.v1);
  return a * b * c / (2.0 * std::abs(cross(r.v1, r.v2)));
}

Lattice2 lattice_from_gram(const GramMatrix2& G, double period) {
  if (!G.positive_definite()) throw Error(ErrorCode::DegenerateLattice, "Gram matrix is not positive definite");
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidParameter, "period must be positive");
  const double l11 = std::sqrt(G.g11);
  const double l21 = G.g12 / l11;
  const double l22 = std::sqrt(G.det() / G.g11);
  return {{period * l11, 0.0}, {period * l21, period * l22}};
}

CollapseVerdict collapse_ratio(double a, double b) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidParameter, "a must be positive");
  CollapseVerdict v;
  v.ratio = b / a;
  if (b == 0.0) {
    v.degenerate = true;
    v.covering_radius = INFINITY;
    return v;
  }
  v.covering_radius = covering_radius({{1.0, 0.0}, {1.0 - a, b}});
  return v;
}

}  // namespace toric
