#include "toric/metric_source.hpp"

#include <cmath>
#include <limits>

namespace toric {

void MetricSource::check_point(double u, double v) const {
  if (!std::isfinite(u) || !std::isfinite(v)) throw Error(ErrorCode::Domain, "non-finite point");
}

MetricJet jet_at(const MetricSource& src, double u, double v) {
  src.check_point(u, v);
  const Mat4<Jet2> comp = src.components(Jet2::variable(u, 0), Jet2::variable(v, 1));
  MetricJet j = zero_jet<double>();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const Jet2& c = comp[i][k];
      j.g[i][k] = c.value();
      j.dg[0][i][k] = c.partial(1, 0);
      j.dg[1][i][k] = c.partial(0, 1);
      j.ddg[0][0][i][k] = c.partial(2, 0);
      j.ddg[1][1][i][k] = c.partial(0, 2);
      j.ddg[0][1][i][k] = j.ddg[1][0][i][k] = c.partial(1, 1);
    }
  return j;
}

MetricJet fd_jet(const std::function<Mat4<double>(double, double)>& f, double u, double v, double scale) {
  // sixth root balances O(h^4) truncation against eps/h^2 rounding in second differences
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) * scale;
  auto at = [&](double du, double dv) { return f(u + du, v + dv); };
  // first and second differences at step s, then Richardson with s/2
  auto stencil = [&](double s, MetricJet& out) {
    const auto c = at(0, 0);
    const auto xp = at(s, 0), xm = at(-s, 0), yp = at(0, s), ym = at(0, -s);
    const auto pp = at(s, s), pm = at(s, -s), mp = at(-s, s), mm = at(-s, -s);
    out = zero_jet<double>();
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        out.g[i][k] = c[i][k];
        out.dg[0][i][k] = (xp[i][k] - xm[i][k]) / (2 * s);
        out.dg[1][i][k] = (yp[i][k] - ym[i][k]) / (2 * s);
        out.ddg[0][0][i][k] = (xp[i][k] - 2 * c[i][k] + xm[i][k]) / (s * s);
        out.ddg[1][1][i][k] = (yp[i][k] - 2 * c[i][k] + ym[i][k]) / (s * s);
        out.ddg[0][1][i][k] = out.ddg[1][0][i][k] =
            (pp[i][k] - pm[i][k] - mp[i][k] + mm[i][k]) / (4 * s * s);
      }
  };
  MetricJet coarse, fine;
  stencil(h, coarse);
  stencil(h / 2, fine);
  MetricJet out = fine;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int a = 0; a < 2; ++a) {
        out.dg[a][i][k] = (4 * fine.dg[a][i][k] - coarse.dg[a][i][k]) / 3;
        for (int b = 0; b < 2; ++b)
          out.ddg[a][b][i][k] = (4 * fine.ddg[a][b][i][k] - coarse.ddg[a][b][i][k]) / 3;
      }
  return out;
}

namespace {

ScalarJet to_scalar_jet(const Jet2& f) {
  ScalarJet s;
  s.value = f.value();
  s.grad = {f.partial(1, 0), f.partial(0, 1), 0.0, 0.0};
  s.hess = zero_mat4<double>();
  s.hess[0][0] = f.partial(2, 0);
  s.hess[1][1] = f.partial(0, 2);
  s.hess[0][1] = s.hess[1][0] = f.partial(1, 1);
  return s;
}

}  // namespace

ScalarJet weyl_lambda_jet(const MetricSource& src, double u, double v, int orientation) {
  const auto tower = jet_tower<4>(src, u, v);
  return to_scalar_jet(weyl_lambda_t(tower, orientation));
}

MetricJet weyl_conformal_jet(const MetricSource& src, double u, double v, int orientation) {
  const auto tower = jet_tower<4>(src, u, v);
  const Jet2 factor = pow(weyl_lambda_t(tower, orientation), 2.0 / 3.0);
  return conformal_jet(jet_at(src, u, v), to_scalar_jet(factor));
}

PositivityResidual scalar_positivity_residual(const MetricSource& src, double u, double v,
                                              int orientation) {
  const auto tower = jet_tower<6>(src, u, v);  // entries are Taylor<4>
  const Jet4 lambda = weyl_lambda_t(tower, orientation);
  const Jet4 factor = pow(lambda, 2.0 / 3.0);
  Mat4<Jet4> conf;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) conf[i][k] = factor * tower.g[i][k];
  const auto conf_tower = tower_from<4>(conf);  // entries are Taylor<2>
  const auto curv = riemann_t(conf_tower);
  const Jet2 s_conf = curv.scalar;
  const Jet2 inv_s = 1.0 / s_conf;

  // Laplacian of S~^{-1} in g~: g~^{ij} (d_i d_j u - Gamma^k_ij d_k u)
  const double du[2] = {inv_s.partial(1, 0), inv_s.partial(0, 1)};
  const double ddu[2][2] = {{inv_s.partial(2, 0), inv_s.partial(1, 1)},
                            {inv_s.partial(1, 1), inv_s.partial(0, 2)}};
  double lap = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double hij = (i < 2 && j < 2) ? ddu[i][j] : 0.0;
      for (int k = 0; k < 2; ++k) hij -= curv.gamma[k][i][j].value() * du[k];
      lap += curv.ginv[i][j].value() * hij;
    }
  PositivityResidual r;
  const double s = s_conf.value();
  r.scalar_conformal = s;
  r.residual = s * s * s * (-6.0 * lap + s * inv_s.value());
  r.relative = std::abs(r.residual) / (s * s * s * s);
  return r;
}

}  // namespace toric
