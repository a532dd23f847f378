#include "toric/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "toric/sweep.hpp"

namespace toric {

GluedGram::GluedGram(RadialProfile profile, BaseDomain domain) : profile_(profile), domain_(domain) {}

std::string GluedGram::name() const {
  std::ostringstream os;
  if (profile_.kind == RadialProfile::Kind::Constant)
    os << "glued(sigma=" << profile_.sigma << ",tau=" << profile_.tau << ")";
  else
    os << "nogap(epsilon=" << profile_.epsilon << ")";
  return os.str();
}

ToricMetric glued_metric(const GluedFamily& fam) {
  if (!(fam.sigma > 0.0)) throw Error(ErrorCode::InvalidParameter, "sigma must be positive");
  if (!(fam.tau > 0.0 && fam.tau < 1.0)) throw Error(ErrorCode::InvalidParameter, "tau must lie in (0, 1)");
  if (!(fam.r_min > 0.0 && fam.r_max > fam.r_min)) throw Error(ErrorCode::InvalidParameter, "bad radial range");
  RadialProfile p;
  p.kind = RadialProfile::Kind::Constant;
  p.sigma = fam.sigma;
  p.tau = fam.tau;
  BaseDomain d{fam.r_min, fam.r_max, 0.0, kPi};
  return ToricMetric(BaseForm::Polar, std::make_shared<GluedGram>(p, d));
}

ToricMetric nogap_metric(const NoGapMetric& n) {
  if (!(n.epsilon > 0.0)) throw Error(ErrorCode::InvalidParameter, "epsilon must be positive");
  if (!(n.r0 > std::exp(1.0))) throw Error(ErrorCode::InvalidParameter, "r0 must exceed e");
  RadialProfile p;
  p.kind = RadialProfile::Kind::NoGap;
  p.epsilon = n.epsilon;
  BaseDomain d{n.r0, INFINITY, 0.0, kPi};
  return ToricMetric(BaseForm::Polar, std::make_shared<GluedGram>(p, d));
}

SweepReport curvature_sweep(const ToricMetric& metric, const SweepGrid& grid) {
  if (grid.nr < 1 || grid.ntheta < 1) throw Error(ErrorCode::InvalidParameter, "empty sweep grid");
  SweepReport rep;
  rep.grid = grid;
  const std::size_t n = static_cast<std::size_t>(grid.nr) * static_cast<std::size_t>(grid.ntheta);
  auto coord = [](double lo, double hi, int count, int i) {
    return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
  };
  struct Cell {
    SweepPoint p;
    double base_dev = 0.0;
  };
  auto cells = parallel_map<Cell>(n, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / static_cast<std::size_t>(grid.ntheta));
    const int j = static_cast<int>(idx % static_cast<std::size_t>(grid.ntheta));
    Cell c;
    c.p.r = coord(grid.r_min, grid.r_max, grid.nr, i);
    c.p.theta = coord(grid.theta_min, kPi - grid.theta_min, grid.ntheta, j);
    const MetricJet jet = jet_at(metric, c.p.r, c.p.theta);
    c.p.rm_norm = riemann(whiten_fiber(jet)).rm_norm;
    c.p.covering_radius = covering_radius(fiber_lattice(metric, c.p.r, c.p.theta));
    const double expect11 = metric.base_form() == BaseForm::Polar ? c.p.r * c.p.r : 1.0;
    c.base_dev = std::max({std::abs(jet.g[0][0] - 1.0), std::abs(jet.g[1][1] - expect11),
                           std::abs(jet.g[0][1])});
    return c;
  });
  rep.points.reserve(n);
  for (const auto& c : cells) {
    rep.points.push_back(c.p);
    rep.sup_rm_norm = std::max(rep.sup_rm_norm, c.p.rm_norm);
    rep.sup_covering_radius = std::max(rep.sup_covering_radius, c.p.covering_radius);
    rep.base_deviation = std::max(rep.base_deviation, c.base_dev);
  }
  return rep;
}

namespace {

// Chart coordinates of the base point at polar radius r and angle theta in (0, pi).
// Cartesian charts are either a quadrant (u, v >= 0) or the half-plane rho > 0.
std::pair<double, double> chart_point(const MetricSource& metric, double r, double th) {
  const auto* tm = dynamic_cast<const ToricMetric*>(&metric);
  if (!tm || tm->base_form() == BaseForm::Polar) return {r, th};
  if (tm->gram_field().domain().v_min >= 0.0) return {r * std::cos(0.5 * th), r * std::sin(0.5 * th)};
  return {r * std::sin(th), r * std::cos(th)};
}

}  // namespace

AsymptoticEstimate asymptotic_curvature_estimate(const MetricSource& metric, const AsymptoticSchedule& s) {
  if (s.count < 4 || !(s.r_min > 0.0) || !(s.r_max > s.r_min))
    throw Error(ErrorCode::InvalidParameter, "asymptotic schedule needs >= 4 radii on an increasing range");
  AsymptoticEstimate est;
  const double ratio = std::pow(s.r_max / s.r_min, 1.0 / (s.count - 1));
  for (int i = 0; i < s.count; ++i)
    est.radii.push_back(i == s.count - 1 ? s.r_max : s.r_min * std::pow(ratio, i));
  const std::size_t nth = static_cast<std::size_t>(s.ntheta);
  const auto values = parallel_map<double>(est.radii.size() * nth, [&](std::size_t idx) {
    const double r = est.radii[idx / nth];
    const int j = static_cast<int>(idx % nth);
    const double th = s.ntheta == 1 ? kPi / 2 : s.theta_min + (kPi - 2 * s.theta_min) * j / (s.ntheta - 1);
    const auto [u, v] = chart_point(metric, r, th);
    return riemann(whiten_fiber(jet_at(metric, u, v))).rm_norm;
  });
  for (std::size_t i = 0; i < est.radii.size(); ++i) {
    double sup = 0.0;
    for (std::size_t j = 0; j < nth; ++j) sup = std::max(sup, values[i * nth + j]);
    est.scaled.push_back(est.radii[i] * est.radii[i] * sup);
  }
  const std::size_t tail = est.radii.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  bool positive = true;
  for (std::size_t i = tail; i < est.radii.size(); ++i) {
    est.estimate = std::max(est.estimate, est.scaled[i]);
    if (!(est.scaled[i] > 0.0)) {
      positive = false;
      continue;
    }
    const double x = std::log(est.radii[i]), y = std::log(est.scaled[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  est.tail_slope = (positive && m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return est;
}

FrameBrackets limit_frame_check(const ToricMetric& metric, double r, double theta) {
  const auto* glued = dynamic_cast<const GluedGram*>(&metric.gram_field());
  if (!glued) throw Error(ErrorCode::Unsupported, "limit frame is defined for glued/no-gap metrics");
  metric.check_point(r, theta);
  const auto& prof = glued->profile();
  const Jet2 rr = Jet2::variable(r, 0);
  const Jet2 sigma = prof.sigma_of(rr);
  const Jet2 tau = prof.tau_of(rr);
  // xi = a d1 + b d2 with coefficients depending on r only
  const Jet2 a = 1.0 / sigma;
  const Jet2 b = -1.0 / (sigma * (1.0 - tau));
  const double av = a.value(), bv = b.value(), da = a.partial(1, 0), db = b.partial(1, 0);
  const GramMatrix2 G = metric.gram_at(r, theta);
  auto fiber_norm = [&](double x, double y) {
    return std::sqrt(std::max(0.0, G.g11 * x * x + 2 * G.g12 * x * y + G.g22 * y * y));
  };
  FrameBrackets fb;
  fb.r = r;
  fb.theta = theta;
  fb.xi_norm = fiber_norm(av, bv);
  fb.exceptional = fiber_norm(da, db);
  fb.normalized_exceptional = fb.exceptional * r / fb.xi_norm;
  fb.along_xi = da / av;
  fb.along_d2 = db - fb.along_xi * bv;
  // [d_r, d_theta], [d_r, d2], [d_theta, xi], [d_theta, d2], [xi, d2] all have
  // theta-independent or constant coefficients and vanish identically
  fb.max_other = 0.0;
  return fb;
}

}  // namespace toric
