#pragma once

// The glued collapsing family on S^3 x [1/2, 2] and the no-gap metrics on the
// end r >= r0, both of the form
//
//     g = dr^2 + r^2 dtheta^2 + sigma r sin(theta) G_{sigma,tau}(r, theta)
//
// with G the glued normalized Gram matrix, plus sweeps over them.

#include <string>
#include <vector>

#include "toric/moduli.hpp"
#include "toric/toric_metric.hpp"

namespace toric {

/// Radial profiles sigma(r), tau(r): constants, or the no-gap choice
/// sigma = eps r / log r, tau = (log r)^{-1/2}.
struct RadialProfile {
  enum class Kind { Constant, NoGap };
  Kind kind = Kind::Constant;
  double sigma = 0.0;
  double tau = 0.0;
  double epsilon = 0.0;

  template <class T>
  T sigma_of(const T& r) const {
    using std::log;
    if (kind == Kind::Constant) return T(sigma);
    return r * epsilon / log(r);
  }
  template <class T>
  T tau_of(const T& r) const {
    using std::log;
    using std::pow;
    if (kind == Kind::Constant) return T(tau);
    return pow(log(r), -0.5);
  }
};

class GluedGram : public GramFieldBase<GluedGram> {
 public:
  GluedGram(RadialProfile profile, BaseDomain domain);

  template <class T>
  Mat2<T> eval(const T& r, const T& theta) const {
    using std::sin;
    const T sigma = profile_.sigma_of(r);
    const T tau = profile_.tau_of(r);
    Mat2<T> G = glued_normalized_gram(sigma, tau, r, theta);
    const T scale = sigma * r * sin(theta);
    for (auto& row : G)
      for (auto& x : row) x = x * scale;
    return G;
  }

  ChartTag chart() const override { return ChartTag::PolarHalfPlane; }
  std::string name() const override;
  BaseDomain domain() const override { return domain_; }
  const RadialProfile& profile() const { return profile_; }

 private:
  RadialProfile profile_;
  BaseDomain domain_;
};

struct GluedFamily {
  double sigma = 1e-3;
  double tau = 1e-1;
  double r_min = 0.5;
  double r_max = 2.0;

  double tau_prime() const { return tangency_parameters(tau); }
};

struct NoGapMetric {
  double epsilon = 0.1;
  double r0 = 10.0;
};

/// Requires 0 < sigma and 0 < tau < 1.
ToricMetric glued_metric(const GluedFamily& fam);
/// Requires epsilon > 0 and r0 > e; evaluation below r0 is a domain error.
ToricMetric nogap_metric(const NoGapMetric& n);

struct SweepGrid {
  int nr = 16;
  int ntheta = 32;
  double r_min = 0.5;
  double r_max = 2.0;
  double theta_min = 0.05;
};

struct SweepPoint {
  double r = 0.0;
  double theta = 0.0;
  double rm_norm = 0.0;
  double covering_radius = 0.0;
};

struct SweepReport {
  SweepGrid grid;
  std::vector<SweepPoint> points;  // r-major, theta-minor
  double sup_rm_norm = 0.0;
  double sup_covering_radius = 0.0;
  double base_deviation = 0.0;  // max |base block - (1, r^2)|
};

/// Grid points are r-major: r_i = r_min + i (r_max - r_min)/(nr - 1), theta
/// likewise on [theta_min, pi - theta_min].
SweepReport curvature_sweep(const ToricMetric& metric, const SweepGrid& grid);

struct AsymptoticSchedule {
  double r_min = 1e2;
  double r_max = 1e6;
  int count = 25;
  double theta_min = 0.05;
  int ntheta = 41;
};

struct AsymptoticEstimate {
  std::vector<double> radii;
  std::vector<double> scaled;  // r^2 sup_theta |Rm|
  double estimate = 0.0;       // max of `scaled` over the tail half
  double tail_slope = 0.0;     // least-squares d log(scaled) / d log r over the tail half
};

/// Samples sit at polar (r, theta); Cartesian charts are mapped from polar coordinates first.
AsymptoticEstimate asymptotic_curvature_estimate(const MetricSource& metric, const AsymptoticSchedule& s);

/// Brackets of the frame {d_r, d_theta, xi = sigma^{-1}(d1 - (1 - tau)^{-1} d2), d2}.
struct FrameBrackets {
  double r = 0.0;
  double theta = 0.0;
  double xi_norm = 0.0;
  double exceptional = 0.0;  // |[d_r, xi]|
  double normalized_exceptional = 0.0;  // |[d_r, xi]| r / |xi|
  double along_xi = 0.0;     // [d_r, xi] = along_xi * xi + along_d2 * d2
  double along_d2 = 0.0;
  double max_other = 0.0;    // largest of the remaining five bracket norms
};

FrameBrackets limit_frame_check(const ToricMetric& metric, double r, double theta = kPi / 2.0);

}  // namespace toric
