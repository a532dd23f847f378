#pragma once

// Levi-Civita curvature of a 4-metric from an exact second-order jet.
//
// Conventions: R_{abcd} is fully covariant with R_{abab} equal to the
// sectional curvature of an orthonormal pair (positive on the round sphere),
// Ric_{bd} = g^{ac} R_{abcd}, S = g^{bd} Ric_{bd}. The curvature operator on
// two-forms is (e_a ^ e_b, e_c ^ e_d) -> R_{abcd} in an orthonormal frame, and
// W+/W- are its Lambda+/Lambda- diagonal blocks minus S/12.
//
// Everything that must also run on Taylor coefficients (for differentiating
// curvature quantities again) is templated on the scalar type.

#include <array>
#include <cmath>
#include <optional>

#include "toric/error.hpp"
#include "toric/jet.hpp"
#include "toric/tensor.hpp"

namespace toric {

enum class ChartTag { CartesianHalfPlane, PolarHalfPlane, Generic };

const char* to_string(ChartTag tag);

/// Point in a chart: (rho, z, phi1, phi2), (r, theta, phi1, phi2), or the
/// chart of a non-toric source. Only the first two coordinates enter metric
/// components; the last two are Killing directions.
struct ChartPoint {
  std::array<double, 4> coords{};
  ChartTag chart = ChartTag::Generic;

  double u() const { return coords[0]; }
  double v() const { return coords[1]; }
};

/// Metric components with first and second partials at one point:
/// dg[k][i][j] = d_k g_ij, ddg[k][l][i][j] = d_k d_l g_ij.
template <class T>
struct MetricJetT {
  Mat4<T> g;
  Tensor3<T> dg;
  Tensor4<T> ddg;
};
using MetricJet = MetricJetT<double>;

/// Scalar function jet (value, gradient, Hessian) in chart coordinates.
struct ScalarJet {
  double value = 1.0;
  std::array<double, 4> grad{};
  Mat4<double> hess{};
};

struct CurvaturePacket {
  Tensor4<double> riemann{};
  Mat4<double> ricci{};
  double scalar = 0.0;
  Mat3d wplus{};
  Mat3d wminus{};
  double rm_norm = 0.0;
  double lambda = 0.0;
  bool has_weyl = false;
  int orientation = 1;
};

enum class TypeKind { TypeI, TypeII, TypeIII };
const char* to_string(TypeKind kind);

struct CurvatureType {
  TypeKind kind = TypeKind::TypeI;
  std::array<double, 3> eigenvalues{};
  double tolerance_used = 0.0;
};

// ---------------------------------------------------------------------------
// Generic kernels

template <class T>
MetricJetT<T> zero_jet() {
  MetricJetT<T> j;
  j.g = zero_mat4<T>();
  for (auto& m : j.dg) m = zero_mat4<T>();
  for (auto& row : j.ddg)
    for (auto& m : row) m = zero_mat4<T>();
  return j;
}

template <class T>
Mat4<T> inverse_metric(const Mat4<T>& g) {
  Mat4<T> inv;
  if (!invert4(g, inv)) throw Error(ErrorCode::DegenerateMetric, "metric matrix is singular");
  // symmetrize; the inverse of a symmetric matrix is symmetric
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const T s = (inv[i][j] + inv[j][i]) * 0.5;
      inv[i][j] = s;
      inv[j][i] = s;
    }
  return inv;
}

/// Gamma[k][i][j] = Gamma^k_{ij}.
template <class T>
Tensor3<T> christoffel_t(const MetricJetT<T>& jet, const Mat4<T>& ginv) {
  Tensor3<T> first;  // Gamma_{m,ij}
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        first[m][i][j] = (jet.dg[i][m][j] + jet.dg[j][m][i] - jet.dg[m][i][j]) * 0.5;
  Tensor3<T> gam;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        T s(0.0);
        for (int m = 0; m < 4; ++m) s += ginv[k][m] * first[m][i][j];
        gam[k][i][j] = s;
        gam[k][j][i] = s;
      }
  return gam;
}

template <class T>
struct CurvatureT {
  Mat4<T> ginv;
  Tensor3<T> gamma;
  Tensor4<T> riemann;
  Mat4<T> ricci;
  T scalar;
};

template <class T>
CurvatureT<T> riemann_t(const MetricJetT<T>& jet) {
  CurvatureT<T> c;
  c.ginv = inverse_metric(jet.g);
  c.gamma = christoffel_t(jet, c.ginv);
  const auto& G = c.gamma;
  // lowered Christoffels: L[m][i][j] = g_{mn} Gamma^n_{ij}
  Tensor3<T> L;
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        T s(0.0);
        for (int n = 0; n < 4; ++n) s += jet.g[m][n] * G[n][i][j];
        L[m][i][j] = s;
      }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int d = 0; d < 4; ++d) {
          if (a == b || cc == d) {
            c.riemann[a][b][cc][d] = T(0.0);
            continue;
          }
          T s = (jet.ddg[b][cc][a][d] + jet.ddg[a][d][b][cc] - jet.ddg[a][cc][b][d] -
                 jet.ddg[b][d][a][cc]) *
                0.5;
          for (int n = 0; n < 4; ++n) s += G[n][b][cc] * L[n][a][d] - G[n][b][d] * L[n][a][cc];
          c.riemann[a][b][cc][d] = s;
        }
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      T s(0.0);
      for (int a = 0; a < 4; ++a)
        for (int cc = 0; cc < 4; ++cc) s += c.ginv[a][cc] * c.riemann[a][b][cc][d];
      c.ricci[b][d] = s;
    }
  T sc(0.0);
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) sc += c.ginv[b][d] * c.ricci[b][d];
  c.scalar = sc;
  return c;
}

/// Orthonormal frame by Gram-Schmidt on d_0..d_3 in index order; row a holds
/// the coordinate components of e_a. orientation = -1 reverses e_3.
template <class T>
Mat4<T> orthonormal_frame(const Mat4<T>& g, int orientation) {
  using std::sqrt;
  Mat4<T> e = zero_mat4<T>();
  auto inner = [&](const Vec4<T>& x, const Vec4<T>& y) {
    T s(0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += g[i][j] * x[i] * y[j];
    return s;
  };
  for (int a = 0; a < 4; ++a) {
    Vec4<T> v;
    for (int i = 0; i < 4; ++i) v[i] = T(i == a ? 1.0 : 0.0);
    for (int b = 0; b < a; ++b) {
      const T p = inner(v, e[b]);
      for (int i = 0; i < 4; ++i) v[i] -= p * e[b][i];
    }
    const T n2 = inner(v, v);
    if (!(value_of(n2) > 0.0))
      throw Error(ErrorCode::DegenerateMetric, "frame construction met a null direction");
    const T inv = T(1.0) / sqrt(n2);
    for (int i = 0; i < 4; ++i) e[a][i] = v[i] * inv;
  }
  if (orientation < 0)
    for (int i = 0; i < 4; ++i) e[3][i] = -e[3][i];
  return e;
}

/// Frame components R(e_a, e_b, e_c, e_d).
template <class T>
Tensor4<T> frame_riemann(const Tensor4<T>& R, const Mat4<T>& e) {
  // contract one slot at a time
  Tensor4<T> t1, t2;
  auto contract = [&](const Tensor4<T>& in, Tensor4<T>& out, int slot) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            T s(0.0);
            for (int m = 0; m < 4; ++m) {
              std::array<int, 4> idx{a, b, c, d};
              const int fa = idx[static_cast<std::size_t>(slot)];
              idx[static_cast<std::size_t>(slot)] = m;
              s += e[fa][m] * in[idx[0]][idx[1]][idx[2]][idx[3]];
            }
            out[a][b][c][d] = s;
          }
  };
  contract(R, t1, 0);
  contract(t1, t2, 1);
  contract(t2, t1, 2);
  contract(t1, t2, 3);
  return t2;
}

/// Lambda+ / Lambda- blocks of the curvature operator in the bases
/// (e01 +- e23, e02 +- e31, e12 +- e03)/sqrt2, minus S/12.
template <class T>
void weyl_blocks_frame(const Tensor4<T>& Rf, const T& scalar, std::array<std::array<T, 3>, 3>& wp,
                       std::array<std::array<T, 3>, 3>& wm) {
  static constexpr int P[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  static constexpr int Q[3][2] = {{2, 3}, {3, 1}, {0, 3}};
  auto r = [&](const int (&x)[2], const int (&y)[2]) -> const T& {
    return Rf[x[0]][x[1]][y[0]][y[1]];
  };
  const T s12 = scalar / 12.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const T same = r(P[a], P[b]) + r(Q[a], Q[b]);
      const T mixed = r(P[a], Q[b]) + r(Q[a], P[b]);
      wp[a][b] = (same + mixed) * 0.5;
      wm[a][b] = (same - mixed) * 0.5;
      if (a == b) {
        wp[a][b] -= s12;
        wm[a][b] -= s12;
      }
    }
}

/// lambda = sqrt(24) |W+| with |.| the Frobenius norm of the Lambda+ block.
template <class T>
T weyl_lambda_t(const MetricJetT<T>& jet, int orientation) {
  using std::sqrt;
  const auto c = riemann_t(jet);
  const auto e = orthonormal_frame(jet.g, orientation);
  const auto Rf = frame_riemann(c.riemann, e);
  std::array<std::array<T, 3>, 3> wp, wm;
  weyl_blocks_frame(Rf, c.scalar, wp, wm);
  T n2(0.0);
  for (const auto& row : wp)
    for (const auto& v : row) n2 += v * v;
  // W+ is treated as zero when it is rounding noise relative to the full curvature
  double r2 = 0.0;
  for (const auto& b : Rf)
    for (const auto& c2 : b)
      for (const auto& d : c2)
        for (const auto& x : d) r2 += value_of(x) * value_of(x);
  if (!(value_of(n2) > 1e-20 * std::max(r2, 1e-300)))
    throw Error(ErrorCode::DegenerateWeyl, "W+ vanishes at the point");
  return sqrt(n2 * 24.0);
}

// ---------------------------------------------------------------------------
// Double-precision operations

Tensor3<double> christoffel(const MetricJet& jet);
CurvaturePacket riemann(const MetricJet& jet);
CurvaturePacket weyl_blocks(CurvaturePacket packet, const MetricJet& jet, int orientation);
/// riemann followed by weyl_blocks.
CurvaturePacket curvature(const MetricJet& jet, int orientation = 1);

double default_type_tolerance(const Mat3d& wplus);
CurvatureType classify_type(const Mat3d& wplus, double tol);
inline CurvatureType classify_type(const Mat3d& wplus) {
  return classify_type(wplus, default_type_tolerance(wplus));
}

MetricJet conformal_jet(const MetricJet& jet, const ScalarJet& factor);

/// max over |R(v,w,v,w)| for unit orthogonalized pairs from a fixed direction set.
double sup_sectional_estimate(const CurvaturePacket& packet, const MetricJet& jet);

/// Largest violation of antisymmetry, pair symmetry and first Bianchi.
double algebraic_defect(const Tensor4<double>& R);

/// |Ric|_g with both indices raised.
double ricci_norm(const CurvaturePacket& packet, const MetricJet& jet);

/// Constant change of basis in the cyclic coordinates 2, 3 (lower-triangular,
/// positive determinant) that makes the fiber block the identity at the point.
/// Curvature invariants and the W+ spectrum are unchanged, but their rounding
/// error no longer grows with the condition number of the fiber block.
/// Returns the jet unchanged when it depends on coordinates 2, 3 or the fiber
/// block is not positive definite.
MetricJet whiten_fiber(const MetricJet& jet);

double frobenius(const Mat3d& m);
double trace(const Mat3d& m);

}  // namespace toric
