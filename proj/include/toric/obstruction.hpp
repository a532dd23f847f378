#pragma once

// Profiles tau, sigma, f along rays, the six limit indicators, the
// L'Hospital incompatibility check, and a symbolic search over power-log
// profile families.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "toric/toric_metric.hpp"

namespace toric {

struct Ray {
  enum class Kind { FixedTheta, FixedZ };
  Kind kind = Kind::FixedTheta;
  double value = kPi / 2.0;
};

struct ProfileSample {
  double rho = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  double f = 0.0;
  double tau_rho = 0.0;
  double sigma_rho = 0.0;
  double rot1 = 0.0;  // |d1| kappa(d1)
  double rot2 = 0.0;  // |d2| kappa(d2)
};

struct RayProfile {
  Ray ray;
  std::vector<ProfileSample> samples;  // rho strictly increasing
};

/// rho is the distance to the axis. On a polar chart the ray is theta fixed
/// and rho = r sin(theta); on a Cartesian chart the ray is z fixed.
RayProfile extract_profile(const ToricMetric& metric, const Ray& ray, const std::vector<double>& rho_schedule);

/// rho_k geometric from lo to hi, count points.
std::vector<double> geometric_schedule(double lo, double hi, int count);

/// sigma = rho^a (log rho)^b, tau = rho^c (log rho)^d, f = rho, with exact
/// derivatives. Requires rho > 1.
RayProfile synthetic_profile(double a, double b, double c, double d, const std::vector<double>& rho_schedule);

enum class Indicator { Tau = 0, FOverRho, SigmaOverRho, Codim2, SigmaLog, TauDerivative };
inline constexpr int kIndicatorCount = 6;
const char* to_string(Indicator i);
/// "1", "2", "6", "3", "4", "5": the equation labels used in reports.
const char* equation_label(Indicator i);

enum class Verdict { Converging, Diverging, Inconclusive };
const char* to_string(Verdict v);

struct TrendRule {
  double power_band = 0.05;   // |a| below this counts as no power-law trend
  double log_band = 0.25;     // |b| threshold for log-rate trends
  double limit_tol = 0.05;    // measured limit counted as the target within this
  double tail_fraction = 0.5;
};

struct IndicatorReport {
  Indicator which = Indicator::Tau;
  double target = 0.0;
  std::vector<double> values;
  double power_exponent = 0.0;  // a in log|I - target| ~ c + a log rho + b log log rho
  double log_exponent = 0.0;    // b
  double measured_limit = 0.0;  // intercept of a quadratic fit in 1/log rho
  Verdict verdict = Verdict::Inconclusive;
  bool informational = false;
};

struct DiagnosticsReport {
  std::vector<double> rho;
  std::array<IndicatorReport, kIndicatorCount> indicators;
  TrendRule rule;
  /// Chain indicators (1, 3, 4, 5, 6) not converging to their targets.
  std::vector<Indicator> failing;
  bool all_chain_pass = false;
  /// Both generators look like unit rotations (|d_i| kappa_i near 1) or neither.
  bool rotation_ambiguous = false;
  double rot1 = 0.0;
  double rot2 = 0.0;
};

/// Needs >= 10 samples spanning >= 2 decades, else InsufficientData.
DiagnosticsReport limit_indicators(const RayProfile& profile, const TrendRule& rule = {});

struct LHospitalCertificate {
  bool applicable = false;
  std::string reason;
  std::vector<double> ratio;             // tau / (sigma / rho)
  std::vector<double> derivative_ratio;  // tau_rho / (sigma_rho / rho - sigma / rho^2)
  std::optional<double> conflict_rho;    // from here on |ratio| > 2 |derivative_ratio| + 1
};

LHospitalCertificate lhospital_check(const RayProfile& profile, const TrendRule& rule = {});

struct ExponentGrid {
  double a_min = -2.0, a_max = 1.0;
  double b_min = -3.0, b_max = 3.0;
  double c_min = -2.0, c_max = 0.0;
  double d_min = -3.0, d_max = 3.0;
  double step = 0.25;
};

struct PowerLogFamily {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  bool operator==(const PowerLogFamily&) const = default;
};

/// Constraint labels: 1 (tau -> 0), 3 (sigma/(rho tau) -> 0), 4 (rho sigma_rho/sigma -> 0),
/// 5 (rho^2 tau_rho/sigma -> 0), 6 (sigma/rho -> 0).
inline constexpr std::array<int, 5> kChainConstraints = {1, 3, 4, 5, 6};

/// Symbolic evaluation of one constraint on a power-log family.
bool constraint_holds(int label, const PowerLogFamily& f);

/// Families satisfying every chain constraint except `dropped` (if given), in
/// lexicographic (a, b, c, d) order.
std::vector<PowerLogFamily> profile_family_search(const ExponentGrid& grid, std::optional<int> dropped = std::nullopt);

}  // namespace toric
