#include "toric/toric_metric.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace toric {

ToricMetric::ToricMetric(BaseForm base, std::shared_ptr<const GramField> gram, bool swap_generators)
    : base_(base), gram_(std::move(gram)), swap_(swap_generators) {
  if (!gram_) throw Error(ErrorCode::InvalidParameter, "null Gram field");
}

ChartTag ToricMetric::chart() const {
  return base_ == BaseForm::Polar ? ChartTag::PolarHalfPlane : ChartTag::CartesianHalfPlane;
}

void ToricMetric::check_point(double u, double v) const {
  MetricSource::check_point(u, v);
  if (!(u > 0.0)) throw Error(ErrorCode::AxisEvaluation, "point lies on the axis (rho or r = 0)");
  if (base_ == BaseForm::Polar && !(v > 0.0 && v < kPi))
    throw Error(ErrorCode::AxisEvaluation, "theta must lie strictly inside (0, pi)");
  const BaseDomain d = gram_->domain();
  if (u < d.u_min || u > d.u_max || v < d.v_min || v > d.v_max)
    throw Error(ErrorCode::Domain, "point outside the Gram field domain");
  if (!gram_at(u, v).positive_definite())
    throw Error(ErrorCode::DegenerateMetric, "Gram matrix is not positive definite");
}

GramMatrix2 ToricMetric::gram_at(double u, double v) const {
  const auto G = fiber<double>(u, v);
  return {G[0][0], G[0][1], G[1][1]};
}

MetricJet assemble(const ToricMetric& metric, const ChartPoint& p) {
  if (p.chart != ChartTag::Generic && p.chart != metric.chart())
    throw Error(ErrorCode::InvalidParameter, "chart point tag does not match the metric chart");
  return jet_at(metric, p.u(), p.v());
}

PTQuantities pt_quantities(const ToricMetric& metric, double u, double v) {
  metric.check_point(u, v);
  const auto G = metric.fiber(Jet2::variable(u, 0), Jet2::variable(v, 1));
  if (!(G[1][1].value() > 0.0)) throw Error(ErrorCode::DegenerateFiber, "G22 vanishes");
  const Jet2 f = sqrt(G[1][1]);
  const Jet2 ratio = G[0][1] / G[1][1];
  const Jet2 tau = 1.0 - ratio;
  const Jet2 sigma2 = G[0][0] - G[0][1] * ratio;
  if (!(sigma2.value() > 0.0)) throw Error(ErrorCode::DegenerateFiber, "orthogonal complement has zero length");
  const Jet2 sigma = sqrt(sigma2);
  PTQuantities q;
  q.f = f.value();
  q.tau = tau.value();
  q.sigma = sigma.value();
  q.f_rho = f.partial(1, 0);
  q.tau_rho = tau.partial(1, 0);
  q.sigma_rho = sigma.partial(1, 0);
  return q;
}

Lattice2 fiber_lattice(const ToricMetric& metric, double u, double v, double period) {
  metric.check_point(u, v);
  return lattice_from_gram(metric.gram_at(u, v), period);
}

double killing_length(const ToricMetric& metric, double u, double v, const KillingCombo& k) {
  const GramMatrix2 G = metric.gram_at(u, v);
  return std::sqrt(std::max(0.0, G.g11 * k.c1 * k.c1 + 2.0 * G.g12 * k.c1 * k.c2 + G.g22 * k.c2 * k.c2));
}

double orbit_geodesic_curvature(const ToricMetric& metric, double u, double v, const KillingCombo& k) {
  if (k.c1 == 0.0 && k.c2 == 0.0) throw Error(ErrorCode::InvalidParameter, "zero Killing combination");
  const MetricJet jet = jet_at(metric, u, v);
  const double len = killing_length(metric, u, v, k);
  if (!(len > 0.0)) throw Error(ErrorCode::DegenerateFiber, "orbit has zero length");
  const auto gam = christoffel(jet);
  const double K[4] = {0.0, 0.0, k.c1, k.c2};
  // K has constant components, so nabla_K K = Gamma^m_ij K^i K^j
  double acc[4] = {0, 0, 0, 0};
  for (int m = 0; m < 4; ++m)
    for (int i = 2; i < 4; ++i)
      for (int j = 2; j < 4; ++j) acc[m] += gam[m][i][j] * K[i] * K[j];
  double n2 = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) n2 += jet.g[a][b] * acc[a] * acc[b];
  // unit tangent T = K/|K| and |K| is constant along the orbit
  return std::sqrt(std::max(0.0, n2)) / (len * len);
}

}  // namespace toric
