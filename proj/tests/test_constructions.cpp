#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <cstdlib>

#include "toric/catalog.hpp"
#include "toric/constructions.hpp"

using namespace toric;

namespace {

GluedFamily family(double sigma, double tau) {
  GluedFamily f;
  f.sigma = sigma;
  f.tau = tau;
  return f;
}

// Gram matrix in the fiber frame xi = (d1 - d2/(1 - tau))/sigma, d2
GramMatrix2 frame_gram(const ToricMetric& m, double sigma, double tau, double r, double th) {
  const auto G = m.gram_at(r, th);
  const double c = 1.0 / (1.0 - tau);
  const double b11 = 1.0 / sigma, b12 = -c / sigma;
  return {b11 * b11 * G.g11 + 2 * b11 * b12 * G.g12 + b12 * b12 * G.g22, b11 * G.g12 + b12 * G.g22, G.g22};
}

}  // namespace

TEST(Constructions, ParameterValidation) {
  EXPECT_THROW(glued_metric(family(0.0, 0.1)), Error);
  EXPECT_THROW(glued_metric(family(0.1, 0.0)), Error);
  EXPECT_THROW(glued_metric(family(0.1, 1.0)), Error);
  GluedFamily f = family(0.1, 0.1);
  f.r_max = f.r_min;
  EXPECT_THROW(glued_metric(f), Error);
  EXPECT_THROW(nogap_metric({0.0, 10.0}), Error);
  EXPECT_THROW(nogap_metric({0.1, 2.0}), Error);
  const auto n = nogap_metric({0.1, 10.0});
  try {
    n.check_point(5.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Domain);
  }
  EXPECT_THROW(glued_metric(family(0.1, 0.1)).check_point(3.0, 1.0), Error);
}

TEST(Constructions, GramFieldIsScaledGluedCurve) {
  const double s = 0.05, t = 0.3;
  const auto m = glued_metric(family(s, t));
  for (double th : {0.3, 1.2, 1.6, 2.4}) {
    const double r = 1.3;
    const auto N = glued_normalized_gram(s, t, r, th);
    const auto G = m.gram_at(r, th);
    const double k = s * r * std::sin(th);
    EXPECT_NEAR(G.g11, k * N[0][0], 1e-15 * k * N[0][0]);
    EXPECT_NEAR(G.g12, k * N[0][1], 1e-15 * std::abs(k * N[0][1]) + 1e-300);
    EXPECT_NEAR(G.g22, k * N[1][1], 1e-15 * k * N[1][1]);
  }
}

TEST(Constructions, CapsAreFlat) {
  for (auto [s, t] : {std::pair{0.05, 0.3}, {1e-3, 0.1}, {0.2, 0.5}}) {
    const auto m = glued_metric(family(s, t));
    for (double r : {0.6, 1.0, 1.9}) {
      // the Gram entries carry rounding relative to the largest one, which the
      // curvature sees amplified by the fiber condition number ~ (r/sigma)^2
      const double tol = std::max(1e-9, 1e-14 * (r / s) * (r / s));
      EXPECT_LT(curvature(whiten_fiber(jet_at(m, r, kPi / 6))).rm_norm, tol) << s << " " << t << " r " << r;
      EXPECT_LT(curvature(whiten_fiber(jet_at(m, r, 5 * kPi / 6))).rm_norm, tol) << s << " " << t << " r " << r;
    }
  }
}

TEST(Constructions, FirstCapIsTheFlatQuotient) {
  // over the first cap the fiber is that of X_{1 - tau, sigma} at rho = r sin(theta)
  const double s = 0.05, t = 0.3;
  const auto m = glued_metric(family(s, t));
  const FlatQuotientGram x(1.0 - t, s);
  for (double th : {0.3, 0.8}) {
    const double r = 1.2, rho = r * std::sin(th);
    const auto G = m.gram_at(r, th);
    const auto X = x.gram(rho, 0.0);
    EXPECT_NEAR(G.g11, X[0][0], 1e-14);
    EXPECT_NEAR(G.g12, X[0][1], 1e-14);
    EXPECT_NEAR(G.g22, X[1][1], 1e-14);
  }
}

TEST(Constructions, InterpolationZoneIsFinite) {
  const auto m = glued_metric(family(1e-4, 1e-2));
  const double rm = curvature(jet_at(m, 1.0, kPi / 2)).rm_norm;
  EXPECT_TRUE(std::isfinite(rm));
  EXPECT_LT(rm, 1e3);
}

TEST(Constructions, SweepReportInvariants) {
  const auto m = glued_metric(family(0.01, 0.1));
  SweepGrid g;
  g.nr = 5;
  g.ntheta = 9;
  const auto rep = curvature_sweep(m, g);
  ASSERT_EQ(rep.points.size(), 45u);
  double rm = 0.0, cov = 0.0;
  for (const auto& p : rep.points) {
    rm = std::max(rm, p.rm_norm);
    cov = std::max(cov, p.covering_radius);
  }
  EXPECT_EQ(rep.sup_rm_norm, rm);
  EXPECT_EQ(rep.sup_covering_radius, cov);
  EXPECT_EQ(rep.base_deviation, 0.0);
  // r-major ordering with inclusive endpoints
  EXPECT_DOUBLE_EQ(rep.points.front().r, g.r_min);
  EXPECT_DOUBLE_EQ(rep.points.front().theta, g.theta_min);
  EXPECT_DOUBLE_EQ(rep.points[8].theta, kPi - g.theta_min);
  EXPECT_DOUBLE_EQ(rep.points.back().r, g.r_max);
  EXPECT_DOUBLE_EQ(rep.points[9].r, g.r_min + (g.r_max - g.r_min) / 4);
  const auto p = rep.points[13];
  EXPECT_EQ(p.rm_norm, curvature(whiten_fiber(jet_at(m, p.r, p.theta))).rm_norm);
  EXPECT_EQ(p.covering_radius, covering_radius(fiber_lattice(m, p.r, p.theta)));
  g.nr = 0;
  EXPECT_THROW(curvature_sweep(m, g), Error);
}

TEST(Constructions, SweepIsIndependentOfThreadCount) {
  const auto m = glued_metric(family(0.01, 0.1));
  SweepGrid g;
  g.nr = 6;
  g.ntheta = 7;
  setenv("TORIC_THREADS", "1", 1);
  const auto a = curvature_sweep(m, g);
  setenv("TORIC_THREADS", "3", 1);
  const auto b = curvature_sweep(m, g);
  unsetenv("TORIC_THREADS");
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].rm_norm, b.points[i].rm_norm);
    EXPECT_EQ(a.points[i].covering_radius, b.points[i].covering_radius);
  }
  EXPECT_EQ(a.sup_rm_norm, b.sup_rm_norm);
}

TEST(Constructions, CollapsingScheduleShrinksCurvatureAndFibers) {
  SweepGrid g;
  g.nr = 6;
  g.ntheta = 16;
  double prev_rm = INFINITY, prev_cov = INFINITY, rm3 = 0.0;
  for (int k = 3; k <= 6; ++k) {
    const auto rep = curvature_sweep(glued_metric(family(std::pow(4.0, -k), std::pow(2.0, -k))), g);
    if (k == 3) rm3 = rep.sup_rm_norm;
    EXPECT_LT(rep.sup_covering_radius, prev_cov) << "k " << k;
    prev_cov = rep.sup_covering_radius;
    prev_rm = rep.sup_rm_norm;
  }
  EXPECT_LT(prev_rm, rm3);
}

TEST(Constructions, EqualParametersDoNotCollapse) {
  SweepGrid g;
  g.nr = 4;
  g.ntheta = 9;
  for (int k = 3; k <= 6; ++k) {
    const double s = std::pow(2.0, -k);
    EXPECT_GT(curvature_sweep(glued_metric(family(s, s)), g).sup_covering_radius, 0.3 * 2 * kPi) << "k " << k;
  }
}

TEST(Constructions, FrameComponentsApproachFlatLimit) {
  // in the frame (d_r, d_theta, xi, d2) the metric tends to diag(1, r^2, 1, r^2 sin^2)
  double prev = INFINITY;
  for (int k = 3; k <= 7; ++k) {
    const double s = std::pow(4.0, -k), t = std::pow(2.0, -k);
    const auto m = glued_metric(family(s, t));
    double dev = 0.0;
    for (double r : {0.6, 1.0, 1.8})
      for (double th : {0.3, 1.0, kPi / 2, 2.2, 2.9}) {
        const auto F = frame_gram(m, s, t, r, th);
        const double rs = r * std::sin(th);
        dev = std::max({dev, std::abs(F.g11 - 1.0), std::abs(F.g12) / rs, std::abs(F.g22 / (rs * rs) - 1.0)});
      }
    EXPECT_LT(dev, prev) << "k " << k;
    prev = dev;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(Constructions, NoGapProfiles) {
  const NoGapMetric n{0.1, 10.0};
  const auto m = nogap_metric(n);
  const auto& prof = dynamic_cast<const GluedGram&>(m.gram_field()).profile();
  double prev = INFINITY;
  for (double r : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double s = prof.sigma_of(r), t = prof.tau_of(r);
    EXPECT_NEAR(s, 0.1 * r / std::log(r), 1e-12 * s);
    EXPECT_NEAR(t, 1.0 / std::sqrt(std::log(r)), 1e-15);
    const double ratio = s / (r * t);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_NEAR(prev, 0.1 / std::sqrt(std::log(1e6)), 1e-12);
  const double rm = curvature(jet_at(m, 100.0, 1.0)).rm_norm;
  EXPECT_TRUE(std::isfinite(rm * 1e4));
  EXPECT_GT(rm, 0.0);
}

TEST(Constructions, NoGapCapMatchesClosedForm) {
  // theta >= 2pi/3: tau_PT = -t/(1 - t) and sigma_PT = eps r / log r with r = rho / sin(theta)
  const double eps = 0.1;
  const auto m = nogap_metric({eps, 10.0});
  for (double r : {50.0, 1e3, 1e5}) {
    const auto q = pt_quantities(m, r, 5 * kPi / 6);
    const double t = 1 / std::sqrt(std::log(r));
    EXPECT_NEAR(q.tau, -t / (1 - t), 1e-9);
    EXPECT_NEAR(q.sigma, eps * r / std::log(r), 1e-9 * eps * r);
  }
}

TEST(Constructions, AsymptoticEstimateOfFlatModelsIsZero) {
  AsymptoticSchedule s;
  s.count = 8;
  s.ntheta = 5;
  EXPECT_LT(asymptotic_curvature_estimate(toric_metric(ModelEnd::flat_r4()), s).estimate, 1e-6);
  // the quotient fiber has condition number (alpha r / sigma)^2, which sets the rounding floor
  const double cond = std::pow(0.3 * s.r_max / 0.7, 2);
  EXPECT_LT(asymptotic_curvature_estimate(toric_metric(ModelEnd::flat_quotient(0.3, 0.7)), s).estimate,
            1e-6 + 4 * std::numeric_limits<double>::epsilon() * cond);
  s.count = 3;
  EXPECT_THROW(asymptotic_curvature_estimate(toric_metric(ModelEnd::flat_r4()), s), Error);
}

TEST(Constructions, AsymptoticEstimateBookkeeping) {
  AsymptoticSchedule s;
  s.r_min = 1e2;
  s.r_max = 1e4;
  s.count = 6;
  s.ntheta = 7;
  const auto m = nogap_metric({0.1, 10.0});
  const auto est = asymptotic_curvature_estimate(m, s);
  ASSERT_EQ(est.radii.size(), 6u);
  EXPECT_NEAR(est.radii[1] / est.radii[0], std::pow(100.0, 0.2), 1e-12);
  double sup = 0.0;
  for (int j = 0; j < s.ntheta; ++j) {
    const double th = s.theta_min + j * (kPi - 2 * s.theta_min) / (s.ntheta - 1);
    sup = std::max(sup, curvature(whiten_fiber(jet_at(m, est.radii[0], th))).rm_norm);
  }
  EXPECT_NEAR(est.scaled[0], est.radii[0] * est.radii[0] * sup, 1e-12 * est.scaled[0]);
  EXPECT_EQ(est.estimate, *std::max_element(est.scaled.begin() + 3, est.scaled.end()));
}

TEST(Constructions, LimitFrameBracketsMatchClosedForm) {
  const double eps = 0.1;
  const auto m = nogap_metric({eps, 10.0});
  for (double r : {1e2, 1e4, 1e6}) {
    const auto b = limit_frame_check(m, r);
    const double L = std::log(r);
    // xi = a d1 + b d2 with a = log r/(eps r); [d_r, xi] = a' d1 + b' d2
    EXPECT_NEAR(b.along_xi, -(1 - 1 / L) / r, 1e-10 / r);
    EXPECT_EQ(b.max_other, 0.0);
    EXPECT_LT(b.max_other, 1e-2 * b.exceptional);
    EXPECT_NEAR(b.normalized_exceptional, b.exceptional * r / b.xi_norm, 1e-12 * b.normalized_exceptional);
  }
  const auto c = limit_frame_check(glued_metric(family(0.01, 0.1)), 1.0);
  EXPECT_EQ(c.exceptional, 0.0);
  EXPECT_EQ(c.along_xi, 0.0);
  EXPECT_THROW(limit_frame_check(toric_metric(ModelEnd::flat_r4()), 1.0), Error);
}

TEST(Constructions, LimitFrameDifferenceOracle) {
  // recompute [d_r, xi] = (d_r a) d1 + (d_r b) d2 by central differences of the coefficients
  const double eps = 0.1, r = 1e3, h = 1e-2;
  const auto m = nogap_metric({eps, 10.0});
  const auto& prof = dynamic_cast<const GluedGram&>(m.gram_field()).profile();
  auto a = [&](double x) { return 1.0 / prof.sigma_of(x); };
  auto bb = [&](double x) { return -1.0 / (prof.sigma_of(x) * (1.0 - prof.tau_of(x))); };
  const double da = (a(r + h) - a(r - h)) / (2 * h), db = (bb(r + h) - bb(r - h)) / (2 * h);
  const auto res = limit_frame_check(m, r);
  EXPECT_NEAR(res.along_xi, da / a(r), 1e-8 * std::abs(da / a(r)));
  EXPECT_NEAR(res.along_d2, db - res.along_xi * bb(r), 1e-6 * std::abs(db));
  const auto G = m.gram_at(r, kPi / 2);
  const double n2 = G.g11 * da * da + 2 * G.g12 * da * db + G.g22 * db * db;
  EXPECT_NEAR(res.exceptional, std::sqrt(n2), 1e-5 * std::sqrt(n2));
}
