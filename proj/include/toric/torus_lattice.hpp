#pragma once

// Flat 2-tori R^2 / Lambda: reduction, area, systole and covering radius.

#include <array>

namespace toric {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

struct Lattice2 {
  Vec2 v1;
  Vec2 v2;
};

/// Gram matrix entries g(d_a, d_b) of the two torus generators.
struct GramMatrix2 {
  double g11 = 1.0;
  double g12 = 0.0;
  double g22 = 1.0;

  double det() const { return g11 * g22 - g12 * g12; }
  bool positive_definite() const { return g11 > 0.0 && det() > 0.0; }
};

/// Lagrange-Gauss reduction: |v1| <= |v2| <= |v2 +- v1|, v1.v2 >= 0.
Lattice2 reduce(const Lattice2& lat);

double area(const Lattice2& lat);
/// Shortest nonzero lattice vector length.
double systole(const Lattice2& lat);
/// Second successive minimum.
double second_minimum(const Lattice2& lat);
/// Max distance from a point of the plane to the lattice; the flat torus diameter.
double covering_radius(const Lattice2& lat);

/// Basis realizing <v_a, v_b> = period^2 G_ab (Cholesky).
Lattice2 lattice_from_gram(const GramMatrix2& G, double period = 2.0 * 3.14159265358979323846);

struct CollapseVerdict {
  double ratio = 0.0;            // b / a
  double covering_radius = 0.0;  // of (1,0), (1-a, b)
  bool degenerate = false;       // b == 0: rank-deficient lattice
};

/// Lattice spanned by (1, 0) and (1 - a, b); diameter -> 0 iff b/a -> 0.
CollapseVerdict collapse_ratio(double a, double b);

}  // namespace toric
