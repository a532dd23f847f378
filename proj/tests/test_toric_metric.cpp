#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "toric/catalog.hpp"
#include "toric/constructions.hpp"
#include "toric/toric_metric.hpp"

using namespace toric;

namespace {

ToricMetric x_metric(double alpha, double sigma) {
  return ToricMetric(BaseForm::Cartesian, std::make_shared<FlatQuotientGram>(alpha, sigma));
}

ToricMetric identity_metric() { return ToricMetric(BaseForm::Cartesian, std::make_shared<ConstantGram>()); }

// rho^2 [[1,0],[0,0]] + [[0,0],[0,1]] with the second entry switched off
class HalfDegenerate : public GramFieldBase<HalfDegenerate> {
 public:
  template <class T>
  Mat2<T> eval(const T& rho, const T&) const {
    return {{{rho * rho, T(0.0)}, {T(0.0), T(0.0)}}};
  }
  ChartTag chart() const override { return ChartTag::CartesianHalfPlane; }
  std::string name() const override { return "half-degenerate"; }
};

}  // namespace

TEST(ToricMetric, AssemblesBlockDiagonalJet) {
  const double alpha = 0.3, sigma = 0.7;
  const auto m = x_metric(alpha, sigma);
  ChartPoint p;
  p.coords = {2.0, 1.0, 0.0, 0.0};
  p.chart = ChartTag::CartesianHalfPlane;
  const auto j = assemble(m, p);
  EXPECT_DOUBLE_EQ(j.g[0][0], 1.0);
  EXPECT_DOUBLE_EQ(j.g[1][1], 1.0);
  EXPECT_DOUBLE_EQ(j.g[0][1], 0.0);
  EXPECT_DOUBLE_EQ(j.g[2][2], 4.0);
  EXPECT_DOUBLE_EQ(j.g[2][3], alpha * 4.0);
  EXPECT_DOUBLE_EQ(j.g[3][3], alpha * alpha * 4.0 + sigma * sigma);
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 4; ++b) EXPECT_EQ(j.g[a][b], 0.0);
  // d_rho g33 = 2 rho, d_rho^2 g33 = 2, nothing depends on z
  EXPECT_DOUBLE_EQ(j.dg[0][2][2], 4.0);
  EXPECT_DOUBLE_EQ(j.ddg[0][0][2][2], 2.0);
  EXPECT_DOUBLE_EQ(j.dg[1][2][2], 0.0);
  p.chart = ChartTag::PolarHalfPlane;
  EXPECT_THROW(assemble(m, p), Error);
}

TEST(ToricMetric, PolarBaseBlock) {
  const ToricMetric m(BaseForm::Polar, std::make_shared<ConstantGram>(GramMatrix2{}, ChartTag::PolarHalfPlane));
  const auto j = jet_at(m, 1.5, 1.0);
  EXPECT_DOUBLE_EQ(j.g[1][1], 2.25);
  EXPECT_DOUBLE_EQ(j.dg[0][1][1], 3.0);
  EXPECT_DOUBLE_EQ(j.ddg[0][0][1][1], 2.0);
  EXPECT_NEAR(curvature(j).rm_norm, 0.0, 1e-14);
}

TEST(ToricMetric, RejectsAxisAndDegenerateFibers) {
  const auto m = x_metric(0.3, 0.7);
  try {
    m.check_point(0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AxisEvaluation);
  }
  const ToricMetric polar(BaseForm::Polar, std::make_shared<ConstantGram>(GramMatrix2{}, ChartTag::PolarHalfPlane));
  EXPECT_THROW(polar.check_point(1.0, 0.0), Error);
  EXPECT_THROW(polar.check_point(1.0, kPi), Error);
  const ToricMetric bad(BaseForm::Cartesian, std::make_shared<HalfDegenerate>());
  try {
    bad.check_point(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateMetric);
  }
  EXPECT_THROW(pt_quantities(bad, 1.0, 0.0), Error);
}

TEST(ToricMetric, FlatProductHasNoCurvature) {
  const auto m = identity_metric();
  for (double rho : {0.5, 1.0, 3.0}) EXPECT_EQ(curvature(jet_at(m, rho, 0.2)).rm_norm, 0.0);
}

TEST(ToricMetric, PTQuantitiesOfIdentity) {
  const auto q = pt_quantities(identity_metric(), 1.0, 0.0);
  EXPECT_DOUBLE_EQ(q.f, 1.0);
  EXPECT_DOUBLE_EQ(q.tau, 1.0);
  EXPECT_DOUBLE_EQ(q.sigma, 1.0);
  EXPECT_DOUBLE_EQ(q.tau_rho, 0.0);
}

TEST(ToricMetric, PTQuantitiesOfFlatQuotient) {
  const double alpha = 0.4, sigma = 0.6;
  const auto m = x_metric(alpha, sigma);
  double last = 0.0;
  for (double rho : {0.5, 2.0, 10.0, 1e3, 1e5}) {
    const auto q = pt_quantities(m, rho, 0.0);
    const double r2 = rho * rho, den = alpha * alpha * r2 + sigma * sigma;
    const double tau = 1 - alpha * r2 / den;
    EXPECT_NEAR(q.tau, tau, 1e-12 * std::max(1.0, std::abs(tau)));
    EXPECT_NEAR(q.f, std::sqrt(den), 1e-12 * std::sqrt(den));
    // orbit area density: sigma f = sqrt(det G) = sigma_X rho, up to the
    // cancellation G11 G22 / det inherent in the Gram entries
    const double cond = r2 * den / (sigma * sigma * r2);
    EXPECT_NEAR(q.sigma * q.f, sigma * rho, 1e-14 * cond * sigma * rho);
    const double dtau = -2 * alpha * rho * sigma * sigma / (den * den);
    EXPECT_NEAR(q.tau_rho, dtau, 1e-10 * std::max(1e-6, std::abs(dtau)));
    last = q.tau;
  }
  EXPECT_NEAR(last, 1 - 1 / alpha, 1e-9);
}

TEST(ToricMetric, XiIsOrthogonalToSecondGenerator) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.1, 0.9), R(0.2, 20.0);
  for (int k = 0; k < 100; ++k) {
    const ToricMetric m(BaseForm::Cartesian,
                        std::make_shared<PerturbedGram>(std::make_shared<FlatQuotientGram>(U(rng), U(rng)), 0.3));
    const double rho = R(rng), z = R(rng);
    const auto q = pt_quantities(m, rho, z);
    const auto G = m.gram_at(rho, z);
    const double c2 = -(1 - q.tau);
    const double inner = G.g12 + c2 * G.g22;
    EXPECT_NEAR(inner, 0.0, 1e-12 * std::max(G.g11, G.g22));
    EXPECT_NEAR(killing_length(m, rho, z, {1.0, c2}), q.sigma, 1e-9 * q.sigma);
    EXPECT_NEAR(q.f, std::sqrt(G.g22), 1e-14 * q.f);
  }
}

TEST(ToricMetric, RadialDerivativesMatchDifferences) {
  const ToricMetric m(BaseForm::Cartesian,
                      std::make_shared<PerturbedGram>(std::make_shared<FlatQuotientGram>(0.3, 0.5), 0.2));
  const double rho = 1.7, z = 0.4, h = 1e-5;
  const auto q = pt_quantities(m, rho, z), a = pt_quantities(m, rho + h, z), b = pt_quantities(m, rho - h, z);
  EXPECT_NEAR(q.tau_rho, (a.tau - b.tau) / (2 * h), 1e-7);
  EXPECT_NEAR(q.sigma_rho, (a.sigma - b.sigma) / (2 * h), 1e-7);
  EXPECT_NEAR(q.f_rho, (a.f - b.f) / (2 * h), 1e-7);
}

TEST(ToricMetric, GluedFirstCapIdentities) {
  GluedFamily fam;
  fam.sigma = 0.05;
  fam.tau = 0.2;
  const auto m = glued_metric(fam);
  for (double r : {0.6, 1.0, 1.8})
    for (double th : {0.2, 0.6, 1.0}) {
      const auto q = pt_quantities(m, r, th);
      const double rs = r * std::sin(th);
      const double f2 = (1 - fam.tau) * (1 - fam.tau) * rs * rs + fam.sigma * fam.sigma;
      EXPECT_NEAR(q.f * q.f, f2, 1e-12 * f2);
      EXPECT_NEAR(q.sigma * q.f, fam.sigma * rs, 1e-12 * fam.sigma * rs);
    }
}

TEST(ToricMetric, FiberLatticeArea) {
  const auto sq = fiber_lattice(identity_metric(), 1.0, 0.0);
  EXPECT_NEAR(norm(sq.v1), 2 * kPi, 1e-14);
  EXPECT_NEAR(norm(sq.v2), 2 * kPi, 1e-14);
  const auto m = x_metric(0.35, 0.8);
  for (double rho : {0.3, 1.0, 4.0}) {
    const auto q = pt_quantities(m, rho, 0.5);
    const double a = area(fiber_lattice(m, rho, 0.5));
    EXPECT_NEAR(a, 4 * kPi * kPi * q.f * q.sigma, 1e-12 * a);
  }
}

TEST(ToricMetric, GluedFiberLatticeCollapsesOnlyWhenSigmaIsSmall) {
  GluedFamily fam;
  fam.sigma = 1e-2;
  fam.tau = 1e-1;
  const auto L = fiber_lattice(glued_metric(fam), 1.0, kPi / 2);
  EXPECT_LT(covering_radius(L), 0.15 * 2 * kPi);
  EXPECT_NEAR(covering_radius(L), oracle::covering_radius_empty_circle(L), 1e-6);
  fam.sigma = 1e-1;
  const auto M = fiber_lattice(glued_metric(fam), 1.0, kPi / 2);
  EXPECT_GT(covering_radius(M), 0.3 * 2 * kPi);
  EXPECT_NEAR(covering_radius(M), oracle::covering_radius_empty_circle(M), 1e-6);
}

TEST(ToricMetric, LengthTimesCurvatureOfRotation) {
  for (double alpha : {0.0, 0.25, 0.5}) {
    const auto m = x_metric(alpha, 0.7);
    for (double rho : {0.1, 1.0, 10.0}) {
      const double k = orbit_geodesic_curvature(m, rho, 0.3, {1.0, 0.0});
      EXPECT_NEAR(killing_length(m, rho, 0.3, {1.0, 0.0}) * k, 1.0, 1e-6);
    }
  }
}

TEST(ToricMetric, ScrewDirectionOrbitsAreStraight) {
  const double alpha = 0.4;
  const auto m = x_metric(alpha, 0.7);
  for (double rho : {0.1, 1.0, 10.0}) EXPECT_LT(orbit_geodesic_curvature(m, rho, 0.0, {1.0, -1.0 / alpha}), 1e-8);
  const auto flat = identity_metric();
  EXPECT_EQ(orbit_geodesic_curvature(flat, 1.0, 0.0, {1.0, 0.0}), 0.0);
  EXPECT_EQ(orbit_geodesic_curvature(flat, 1.0, 0.0, {0.0, 1.0}), 0.0);
  EXPECT_THROW(orbit_geodesic_curvature(flat, 1.0, 0.0, {0.0, 0.0}), Error);
}

TEST(ToricMetric, GeodesicCurvatureFromGradientOfLength) {
  // for a Killing field K, |nabla_K K| / |K|^2 = |grad log |K|| on the base
  const ToricMetric m(BaseForm::Cartesian,
                      std::make_shared<PerturbedGram>(std::make_shared<FlatQuotientGram>(0.3, 0.5), 0.3));
  const KillingCombo c{0.7, -1.1};
  const double u = 1.3, v = 0.4, h = 1e-5;
  auto L = [&](double a, double b) { return std::log(killing_length(m, a, b, c)); };
  const double gu = (L(u + h, v) - L(u - h, v)) / (2 * h), gv = (L(u, v + h) - L(u, v - h)) / (2 * h);
  EXPECT_NEAR(orbit_geodesic_curvature(m, u, v, c), std::hypot(gu, gv), 1e-7);
}

TEST(ToricMetric, SwappingGeneratorsIsAnIsometry) {
  const ToricMetric m(BaseForm::Cartesian,
                      std::make_shared<PerturbedGram>(std::make_shared<FlatQuotientGram>(0.3, 0.5), 0.3));
  const auto s = m.with_swapped_generators();
  EXPECT_TRUE(s.generators_swapped());
  for (double rho : {0.5, 1.5})
    for (double z : {-1.0, 0.7}) {
      const auto a = curvature(jet_at(m, rho, z)), b = curvature(jet_at(s, rho, z));
      EXPECT_NEAR(a.rm_norm, b.rm_norm, 1e-12 * std::max(1.0, a.rm_norm));
      EXPECT_NEAR(a.scalar, b.scalar, 1e-12 * std::max(1.0, std::abs(a.scalar)));
      EXPECT_NEAR(area(fiber_lattice(m, rho, z)), area(fiber_lattice(s, rho, z)), 1e-10);
    }
}
