#include "toric/curvature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace toric {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateMetric: return "degenerate-metric";
    case ErrorCode::AxisEvaluation: return "axis-evaluation";
    case ErrorCode::DegenerateLattice: return "degenerate-lattice";
    case ErrorCode::InvalidTolerance: return "invalid-tolerance";
    case ErrorCode::ConformalFactor: return "conformal-factor";
    case ErrorCode::DegenerateWeyl: return "degenerate-weyl";
    case ErrorCode::DegenerateFiber: return "degenerate-fiber";
    case ErrorCode::Normalization: return "normalization";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

const char* to_string(ChartTag tag) {
  switch (tag) {
    case ChartTag::CartesianHalfPlane: return "cartesian";
    case ChartTag::PolarHalfPlane: return "polar";
    case ChartTag::Generic: return "generic";
  }
  return "generic";
}

const char* to_string(TypeKind kind) {
  switch (kind) {
    case TypeKind::TypeI: return "TypeI";
    case TypeKind::TypeII: return "TypeII";
    case TypeKind::TypeIII: return "TypeIII";
  }
  return "?";
}

Tensor3<double> christoffel(const MetricJet& jet) {
  return christoffel_t(jet, inverse_metric(jet.g));
}

CurvaturePacket riemann(const MetricJet& jet) {
  const auto c = riemann_t(jet);
  CurvaturePacket p;
  p.riemann = c.riemann;
  p.ricci = c.ricci;
  p.scalar = c.scalar;
  // |Rm|^2 = R_{abcd} R^{abcd}: raise all four indices one at a time
  Tensor4<double> up = c.riemann, tmp{};
  for (int slot = 0; slot < 4; ++slot) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int cc = 0; cc < 4; ++cc)
          for (int d = 0; d < 4; ++d) {
            std::array<int, 4> idx{a, b, cc, d};
            const int free = idx[static_cast<std::size_t>(slot)];
            double s = 0.0;
            for (int m = 0; m < 4; ++m) {
              idx[static_cast<std::size_t>(slot)] = m;
              s += c.ginv[free][m] * up[idx[0]][idx[1]][idx[2]][idx[3]];
            }
            tmp[a][b][cc][d] = s;
          }
    up = tmp;
  }
  double n2 = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int d = 0; d < 4; ++d) n2 += c.riemann[a][b][cc][d] * up[a][b][cc][d];
  p.rm_norm = std::sqrt(std::max(n2, 0.0));
  return p;
}

CurvaturePacket weyl_blocks(CurvaturePacket packet, const MetricJet& jet, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorCode::InvalidParameter, "orientation must be +1 or -1");
  const auto e = orthonormal_frame(jet.g, orientation);
  const auto Rf = frame_riemann(packet.riemann, e);
  std::array<std::array<double, 3>, 3> wp, wm;
  weyl_blocks_frame(Rf, packet.scalar, wp, wm);
  packet.wplus = wp;
  packet.wminus = wm;
  packet.lambda = std::sqrt(24.0) * frobenius(packet.wplus);
  packet.has_weyl = true;
  packet.orientation = orientation;
  return packet;
}

CurvaturePacket curvature(const MetricJet& jet, int orientation) {
  return weyl_blocks(riemann(jet), jet, orientation);
}

double frobenius(const Mat3d& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

double trace(const Mat3d& m) { return m[0][0] + m[1][1] + m[2][2]; }

double default_type_tolerance(const Mat3d& wplus) {
  return 1e-6 * std::max(1.0, frobenius(wplus));
}

CurvatureType classify_type(const Mat3d& wplus, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidTolerance, "tolerance must be positive");
  if (std::abs(trace(wplus)) > tol)
    throw Error(ErrorCode::InvalidParameter, "W+ block is not trace-free within tolerance");
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = 0.5 * (wplus[i][j] + wplus[j][i]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  CurvatureType t;
  for (int i = 0; i < 3; ++i) t.eigenvalues[i] = es.eigenvalues()(i);  // ascending
  t.tolerance_used = tol;
  const auto& ev = t.eigenvalues;
  const bool all_zero = std::all_of(ev.begin(), ev.end(), [&](double x) { return std::abs(x) <= tol; });
  const int coincident = (ev[1] - ev[0] <= tol ? 1 : 0) + (ev[2] - ev[1] <= tol ? 1 : 0);
  if (all_zero || coincident == 2)
    t.kind = TypeKind::TypeI;
  else if (coincident == 1)
    t.kind = TypeKind::TypeII;
  else
    t.kind = TypeKind::TypeIII;
  return t;
}

MetricJet conformal_jet(const MetricJet& jet, const ScalarJet& f) {
  if (!(f.value > 0.0)) throw Error(ErrorCode::ConformalFactor, "conformal factor must be positive");
  MetricJet out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      out.g[i][j] = f.value * jet.g[i][j];
      for (int k = 0; k < 4; ++k) {
        out.dg[k][i][j] = f.grad[k] * jet.g[i][j] + f.value * jet.dg[k][i][j];
        for (int l = 0; l < 4; ++l)
          out.ddg[k][l][i][j] = f.hess[k][l] * jet.g[i][j] + f.grad[k] * jet.dg[l][i][j] +
                                f.grad[l] * jet.dg[k][i][j] + f.value * jet.ddg[k][l][i][j];
      }
    }
  return out;
}

double sup_sectional_estimate(const CurvaturePacket& packet, const MetricJet& jet) {
  const auto e = orthonormal_frame(jet.g, 1);
  const auto Rf = frame_riemann(packet.riemann, e);
  // directions {-1,0,1}^4 up to sign, in frame components
  std::vector<std::array<double, 4>> dirs;
  for (int code = 1; code < 81; ++code) {
    std::array<double, 4> v{};
    int c = code;
    for (int i = 0; i < 4; ++i) {
      v[i] = static_cast<double>(c % 3) - 1.0;
      c /= 3;
    }
    int first = 0;
    while (first < 4 && v[first] == 0.0) ++first;
    if (first == 4 || v[first] < 0.0) continue;
    dirs.push_back(v);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      auto v = dirs[i], w = dirs[j];
      double vv = 0, vw = 0;
      for (int k = 0; k < 4; ++k) {
        vv += v[k] * v[k];
        vw += v[k] * w[k];
      }
      for (int k = 0; k < 4; ++k) w[k] -= vw / vv * v[k];
      double ww = 0;
      for (int k = 0; k < 4; ++k) ww += w[k] * w[k];
      if (ww < 1e-12) continue;
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) s += Rf[a][b][c][d] * v[a] * w[b] * v[c] * w[d];
      best = std::max(best, std::abs(s) / (vv * ww));
    }
  return best;
}

double algebraic_defect(const Tensor4<double>& R) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          worst = std::max(worst, std::abs(R[a][b][c][d] + R[b][a][c][d]));
          worst = std::max(worst, std::abs(R[a][b][c][d] + R[a][b][d][c]));
          worst = std::max(worst, std::abs(R[a][b][c][d] - R[c][d][a][b]));
          worst = std::max(worst, std::abs(R[a][b][c][d] + R[a][c][d][b] + R[a][d][b][c]));
        }
  return worst;
}

double ricci_norm(const CurvaturePacket& packet, const MetricJet& jet) {
  const Mat4<double> gi = inverse_metric(jet.g);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) acc += gi[a][c] * gi[b][d] * packet.ricci[a][b] * packet.ricci[c][d];
  return std::sqrt(std::max(0.0, acc));
}

MetricJet whiten_fiber(const MetricJet& jet) {
  for (int k = 2; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (jet.dg[k][i][j] != 0.0) return jet;
  const double a = jet.g[2][2], b = jet.g[2][3], c = jet.g[3][3];
  if (!(a > 0.0)) return jet;
  const double l11 = std::sqrt(a), l21 = b / l11, d = c - l21 * l21;
  if (!(d > 0.0)) return jet;
  const double l22 = std::sqrt(d);
  // T = diag(1, 1, L^{-1}) with G = L L^T
  Mat4<double> T = zero_mat4<double>();
  T[0][0] = T[1][1] = 1.0;
  T[2][2] = 1.0 / l11;
  T[3][2] = -l21 / (l11 * l22);
  T[3][3] = 1.0 / l22;
  auto congruence = [&](const Mat4<double>& m) {
    Mat4<double> r = zero_mat4<double>();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int p = 0; p < 4; ++p)
          for (int q = 0; q < 4; ++q) s += T[i][p] * m[p][q] * T[j][q];
        r[i][j] = s;
      }
    return r;
  };
  MetricJet out = jet;
  out.g = congruence(jet.g);
  for (int k = 0; k < 4; ++k) {
    out.dg[k] = congruence(jet.dg[k]);
    for (int l = 0; l < 4; ++l) out.ddg[k][l] = congruence(jet.ddg[k][l]);
  }
  return out;
}

}  // namespace toric
