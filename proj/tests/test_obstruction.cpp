#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <tuple>

#include "toric/catalog.hpp"
#include "toric/constructions.hpp"
#include "toric/error.hpp"
#include "toric/obstruction.hpp"

using namespace toric;

namespace {

// log |I(rho)| for the constraint quantities of sigma = rho^a L^b, tau = rho^c L^d,
// written in terms of L = log rho so that rho = e^L never has to be formed.
double log_indicator(int label, const PowerLogFamily& f, double L) {
  const double ls = f.a * L + f.b * std::log(L), lt = f.c * L + f.d * std::log(L);
  const double ninf = -std::numeric_limits<double>::infinity();
  auto log_abs = [&](double x) { return x == 0.0 ? ninf : std::log(std::abs(x)); };
  switch (label) {
    case 1: return lt;
    case 3: return ls - L - lt;
    case 4: return log_abs(f.a + f.b / L);           // rho sigma_rho / sigma
    case 5: return L + lt - ls + log_abs(f.c + f.d / L);  // rho^2 tau_rho / sigma
    case 6: return ls - L;
  }
  return 0.0;
}

// On the quarter grid a power term moves the log by >= 0.25 * 9e5 between the two
// sample points, a pure log term by >= 0.25 * log 10.
bool oracle_vanishes(int label, const PowerLogFamily& f) {
  const double lo = log_indicator(label, f, 1e5), hi = log_indicator(label, f, 1e6);
  if (hi == -std::numeric_limits<double>::infinity()) return true;
  return hi < lo - 0.1;
}

using Key = std::tuple<double, double, double, double>;

std::set<Key> oracle_search(const ExponentGrid& g, int dropped) {
  std::set<Key> out;
  for (double a = g.a_min; a <= g.a_max + 1e-9; a += g.step)
    for (double b = g.b_min; b <= g.b_max + 1e-9; b += g.step)
      for (double c = g.c_min; c <= g.c_max + 1e-9; c += g.step)
        for (double d = g.d_min; d <= g.d_max + 1e-9; d += g.step) {
          const PowerLogFamily f{a, b, c, d};
          bool ok = true;
          for (int label : kChainConstraints)
            if (label != dropped && !oracle_vanishes(label, f)) ok = false;
          if (ok) out.insert({a, b, c, d});
        }
  return out;
}

std::set<Key> as_set(const std::vector<PowerLogFamily>& v) {
  std::set<Key> out;
  for (const auto& f : v) out.insert({f.a, f.b, f.c, f.d});
  return out;
}

const IndicatorReport& ind(const DiagnosticsReport& r, Indicator i) { return r.indicators[static_cast<int>(i)]; }

}  // namespace

TEST(Obstruction, GeometricSchedule) {
  const auto s = geometric_schedule(10.0, 1e4, 4);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s.front(), 10.0);
  EXPECT_NEAR(s[1], 100.0, 1e-10);
  EXPECT_DOUBLE_EQ(s.back(), 1e4);
  EXPECT_THROW(geometric_schedule(0.0, 1.0, 4), Error);
  EXPECT_THROW(geometric_schedule(2.0, 1.0, 4), Error);
}

TEST(Obstruction, ExtractionMatchesPointQuantities) {
  GluedFamily fam;
  fam.sigma = 0.05;
  fam.tau = 0.3;
  const auto m = glued_metric(fam);
  const double th = 5 * kPi / 6, sn = std::sin(th);
  const auto prof = extract_profile(m, {Ray::Kind::FixedTheta, th}, {0.3, 0.5, 0.9});
  for (const auto& s : prof.samples) {
    const auto q = pt_quantities(m, s.rho / sn, th);
    EXPECT_EQ(s.tau, q.tau);
    EXPECT_EQ(s.sigma, q.sigma);
    EXPECT_EQ(s.f, q.f);
    // derivatives along the ray against central differences in rho
    const double h = 1e-5;
    const auto qp = pt_quantities(m, (s.rho + h) / sn, th), qm = pt_quantities(m, (s.rho - h) / sn, th);
    EXPECT_NEAR(s.tau_rho, (qp.tau - qm.tau) / (2 * h), 1e-6);
    EXPECT_NEAR(s.sigma_rho, (qp.sigma - qm.sigma) / (2 * h), 1e-6);
  }
}

TEST(Obstruction, IdentityFiberIsConstant) {
  // G = I: tau = 1 - 0/1, sigma = sqrt(1 - 0)
  const ToricMetric m(BaseForm::Cartesian, std::make_shared<ConstantGram>(GramMatrix2{}));
  const auto prof = extract_profile(m, {Ray::Kind::FixedZ, 0.0}, geometric_schedule(2.0, 500.0, 12));
  for (const auto& s : prof.samples) {
    EXPECT_DOUBLE_EQ(s.tau, 1.0);
    EXPECT_DOUBLE_EQ(s.sigma, 1.0);
    EXPECT_DOUBLE_EQ(s.tau_rho, 0.0);
    EXPECT_DOUBLE_EQ(s.sigma_rho, 0.0);
  }
}

TEST(Obstruction, RayMustMatchChart) {
  const auto polar = nogap_metric({0.1, 10.0});
  EXPECT_THROW(extract_profile(polar, {Ray::Kind::FixedZ, 0.0}, {20.0, 30.0}), Error);
  EXPECT_THROW(extract_profile(polar, {Ray::Kind::FixedTheta, 0.0}, {20.0, 30.0}), Error);
  EXPECT_THROW(extract_profile(polar, {Ray::Kind::FixedTheta, 1.0}, {30.0, 20.0}), Error);
}

TEST(Obstruction, NoGapProfileIsClosedForm) {
  // on the cap theta >= 2pi/3 the fiber is exactly the tangent model: with r = rho/sin(theta)
  // and t = (log r)^-1/2, tau = -t/(1 - t) and sigma = eps r/log r
  const double eps = 0.1, th = 5 * kPi / 6;
  const auto m = nogap_metric({eps, 10.0});
  const auto prof = extract_profile(m, {Ray::Kind::FixedTheta, th}, geometric_schedule(1e2, 1e12, 41));
  for (const auto& s : prof.samples) {
    const double r = s.rho / std::sin(th), L = std::log(r), t = 1 / std::sqrt(L);
    EXPECT_NEAR(s.tau, -t / (1 - t), 1e-8);
    EXPECT_NEAR(s.sigma, eps * r / L, 1e-8 * s.sigma);
  }
  const auto rep = limit_indicators(prof);
  EXPECT_EQ(ind(rep, Indicator::Tau).verdict, Verdict::Converging);
  EXPECT_EQ(ind(rep, Indicator::Codim2).verdict, Verdict::Converging)
      << ind(rep, Indicator::Codim2).power_exponent << " " << ind(rep, Indicator::Codim2).log_exponent;
  EXPECT_EQ(ind(rep, Indicator::SigmaOverRho).verdict, Verdict::Converging);
  // rho sigma_rho / sigma = 1 - 1/log r
  const auto& i4 = ind(rep, Indicator::SigmaLog);
  for (std::size_t k = 0; k < prof.samples.size(); ++k)
    EXPECT_NEAR(i4.values[k], 1 - 1 / std::log(prof.samples[k].rho / std::sin(th)), 1e-7);
  EXPECT_NE(i4.verdict, Verdict::Converging);
  EXPECT_NEAR(i4.measured_limit, 1.0, 0.05);
  EXPECT_FALSE(rep.all_chain_pass);
  EXPECT_NE(std::find(rep.failing.begin(), rep.failing.end(), Indicator::SigmaLog), rep.failing.end());

  const auto cert = lhospital_check(prof);
  EXPECT_FALSE(cert.applicable);
  EXPECT_NE(cert.reason.find("(4)"), std::string::npos);
}

TEST(Obstruction, IrrationalQuotientFailsTau) {
  const double alpha = (std::sqrt(5.0) - 1) / 2;
  const auto m = toric_metric(ModelEnd::flat_quotient(alpha, 0.5));
  const auto prof = extract_profile(m, {Ray::Kind::FixedZ, 0.0}, geometric_schedule(10.0, 1e3, 30));
  EXPECT_NEAR(prof.samples.back().tau, 1 - 1 / alpha, 1e-4);
  const auto rep = limit_indicators(prof);
  EXPECT_EQ(ind(rep, Indicator::Tau).verdict, Verdict::Diverging);
  EXPECT_NEAR(ind(rep, Indicator::Tau).measured_limit, 1 - 1 / alpha, 1e-3);
}

TEST(Obstruction, SyntheticPowerProfile) {
  // tau = rho^-1/2, sigma = rho^1/4: sigma/(rho tau) = rho^-1/4, rho^2 tau_rho/sigma = -rho^1/4 / 2
  const auto prof = synthetic_profile(0.25, 0.0, -0.5, 0.0, geometric_schedule(10.0, 1e6, 30));
  const auto rep = limit_indicators(prof);
  const auto& i3 = ind(rep, Indicator::Codim2);
  const auto& i5 = ind(rep, Indicator::TauDerivative);
  for (std::size_t k = 0; k < prof.samples.size(); ++k) {
    const double rho = prof.samples[k].rho;
    EXPECT_NEAR(i3.values[k], std::pow(rho, -0.25), 1e-12 * i3.values[k]);
    EXPECT_NEAR(i5.values[k], -0.5 * std::pow(rho, 0.25), 1e-12 * std::abs(i5.values[k]));
  }
  EXPECT_EQ(i3.verdict, Verdict::Converging);
  EXPECT_NEAR(i3.power_exponent, -0.25, 1e-9);
  EXPECT_EQ(i5.verdict, Verdict::Diverging);
  EXPECT_NEAR(i5.power_exponent, 0.25, 1e-9);
  EXPECT_FALSE(rep.all_chain_pass);
}

TEST(Obstruction, SyntheticLogProfile) {
  // tau = 1/log rho, sigma = rho/(log rho)^3: (1), (3), (6) decay by log rates, (4) -> 1
  const auto prof = synthetic_profile(1.0, -3.0, 0.0, -1.0, geometric_schedule(10.0, 1e8, 40));
  const auto rep = limit_indicators(prof);
  EXPECT_EQ(ind(rep, Indicator::Tau).verdict, Verdict::Converging);
  EXPECT_EQ(ind(rep, Indicator::Codim2).verdict, Verdict::Converging);
  EXPECT_EQ(ind(rep, Indicator::SigmaOverRho).verdict, Verdict::Converging);
  EXPECT_NE(ind(rep, Indicator::SigmaLog).verdict, Verdict::Converging);
  EXPECT_FALSE(lhospital_check(prof).applicable);
}

TEST(Obstruction, InsufficientData) {
  try {
    limit_indicators(synthetic_profile(0, 0, -1, 0, geometric_schedule(10.0, 1e4, 9)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
  try {
    limit_indicators(synthetic_profile(0, 0, -1, 0, geometric_schedule(10.0, 500.0, 20)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(Obstruction, CertificateOnInconsistentProfile) {
  // tau_rho forced to zero: the five indicators converge while tau/(sigma/rho) = rho L^2
  // grows against a vanishing derivative ratio
  auto prof = synthetic_profile(0.0, -3.0, 0.0, -1.0, geometric_schedule(10.0, 1e6, 30));
  for (auto& s : prof.samples) s.tau_rho = 0.0;
  const auto rep = limit_indicators(prof);
  EXPECT_TRUE(rep.all_chain_pass);
  const auto cert = lhospital_check(prof);
  ASSERT_TRUE(cert.applicable);
  ASSERT_TRUE(cert.conflict_rho.has_value());
  EXPECT_EQ(*cert.conflict_rho, prof.samples.front().rho);
  for (std::size_t k = 0; k < prof.samples.size(); ++k) {
    const double L = std::log(prof.samples[k].rho);
    EXPECT_NEAR(cert.ratio[k], prof.samples[k].rho * L * L, 1e-10 * cert.ratio[k]);
    EXPECT_EQ(cert.derivative_ratio[k], 0.0);
  }
}

TEST(Obstruction, ConstraintsMatchOracle) {
  const ExponentGrid g;
  for (double a = g.a_min; a <= g.a_max; a += 0.25)
    for (double b = g.b_min; b <= g.b_max; b += 0.5)
      for (double c = g.c_min; c <= g.c_max; c += 0.25)
        for (double d = g.d_min; d <= g.d_max; d += 0.5)
          for (int label : kChainConstraints) {
            const PowerLogFamily f{a, b, c, d};
            EXPECT_EQ(constraint_holds(label, f), oracle_vanishes(label, f))
                << "(" << label << ") a " << a << " b " << b << " c " << c << " d " << d;
          }
  EXPECT_THROW(constraint_holds(2, {}), Error);
}

TEST(Obstruction, DefaultSearchIsEmpty) {
  EXPECT_TRUE(profile_family_search({}).empty());
  ExponentGrid fine;
  fine.step = 0.125;
  EXPECT_TRUE(profile_family_search(fine).empty());
  ExponentGrid log_decay;
  log_decay.c_min = log_decay.c_max = 0.0;
  log_decay.d_max = -0.25;
  EXPECT_TRUE(profile_family_search(log_decay).empty());
}

TEST(Obstruction, DroppedConstraintSearchMatchesOracle) {
  const ExponentGrid g;
  for (int dropped : kChainConstraints) {
    const auto found = profile_family_search(g, dropped);
    EXPECT_EQ(as_set(found), oracle_search(g, dropped)) << "dropped (" << dropped << ")";
    EXPECT_TRUE(std::is_sorted(found.begin(), found.end(), [](const auto& x, const auto& y) {
      return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
    }));
    // sigma/rho -> 0 follows from rho sigma_rho/sigma -> 0, so only (6) is redundant
    if (dropped == 6)
      EXPECT_TRUE(found.empty());
    else
      EXPECT_FALSE(found.empty()) << "dropped (" << dropped << ")";
  }
  EXPECT_THROW(profile_family_search(g, 2), Error);
}

TEST(Obstruction, DropFiveWitness) {
  // a = 0, b = 0, c = -1/2, d = 0: tau = rho^-1/2, sigma = 1
  const PowerLogFamily f{0.0, 0.0, -0.5, 0.0};
  for (int label : {1, 3, 4, 6}) EXPECT_TRUE(constraint_holds(label, f)) << label;
  EXPECT_FALSE(constraint_holds(5, f));
  const auto found = profile_family_search({}, 5);
  EXPECT_NE(std::find(found.begin(), found.end(), f), found.end());
}

TEST(Obstruction, ResultsIndependentOfThreadCount) {
  const auto m = nogap_metric({0.1, 10.0});
  const auto sched = geometric_schedule(1e2, 1e6, 20);
  ::setenv("TORIC_THREADS", "1", 1);
  const auto p1 = extract_profile(m, {Ray::Kind::FixedTheta, 1.0}, sched);
  const auto s1 = profile_family_search({}, 4);
  ::setenv("TORIC_THREADS", "3", 1);
  const auto p3 = extract_profile(m, {Ray::Kind::FixedTheta, 1.0}, sched);
  const auto s3 = profile_family_search({}, 4);
  ::unsetenv("TORIC_THREADS");
  ASSERT_EQ(p1.samples.size(), p3.samples.size());
  for (std::size_t k = 0; k < p1.samples.size(); ++k) {
    EXPECT_EQ(p1.samples[k].tau, p3.samples[k].tau);
    EXPECT_EQ(p1.samples[k].sigma_rho, p3.samples[k].sigma_rho);
  }
  EXPECT_EQ(s1, s3);
}
