#include "toric/obstruction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "toric/sweep.hpp"

namespace toric {

const char* to_string(Indicator i) {
  switch (i) {
    case Indicator::Tau: return "tau";
    case Indicator::FOverRho: return "f/rho";
    case Indicator::SigmaOverRho: return "sigma/rho";
    case Indicator::Codim2: return "sigma/(rho*tau)";
    case Indicator::SigmaLog: return "rho*sigma_rho/sigma";
    case Indicator::TauDerivative: return "rho^2*tau_rho/sigma";
  }
  return "?";
}

const char* equation_label(Indicator i) {
  switch (i) {
    case Indicator::Tau: return "1";
    case Indicator::FOverRho: return "2";
    case Indicator::SigmaOverRho: return "6";
    case Indicator::Codim2: return "3";
    case Indicator::SigmaLog: return "4";
    case Indicator::TauDerivative: return "5";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging: return "converging";
    case Verdict::Diverging: return "diverging";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<double> geometric_schedule(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw Error(ErrorCode::InvalidParameter, "bad geometric schedule");
  std::vector<double> out;
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(i == count - 1 ? hi : lo * std::exp(step * i));
  return out;
}

namespace {

void check_schedule(const std::vector<double>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0)) throw Error(ErrorCode::InvalidParameter, "rho schedule must be positive");
    if (i > 0 && !(s[i] > s[i - 1])) throw Error(ErrorCode::InvalidParameter, "rho schedule must increase strictly");
  }
}

}  // namespace

RayProfile extract_profile(const ToricMetric& metric, const Ray& ray, const std::vector<double>& rho_schedule) {
  check_schedule(rho_schedule);
  const bool polar = metric.base_form() == BaseForm::Polar;
  if (polar != (ray.kind == Ray::Kind::FixedTheta))
    throw Error(ErrorCode::InvalidParameter, "fixed-theta rays need a polar chart, fixed-z rays a Cartesian one");
  if (polar && !(ray.value > 0.0 && ray.value < kPi)) throw Error(ErrorCode::AxisEvaluation, "ray lies on the axis");
  const double scale = polar ? 1.0 / std::sin(ray.value) : 1.0;
  RayProfile out;
  out.ray = ray;
  out.samples = parallel_map<ProfileSample>(rho_schedule.size(), [&](std::size_t i) {
    const double rho = rho_schedule[i];
    const double u = rho * scale;
    const double v = ray.value;
    const PTQuantities q = pt_quantities(metric, u, v);
    ProfileSample s;
    s.rho = rho;
    s.tau = q.tau;
    s.sigma = q.sigma;
    s.f = q.f;
    s.tau_rho = q.tau_rho * scale;
    s.sigma_rho = q.sigma_rho * scale;
    s.rot1 = orbit_geodesic_curvature(metric, u, v, {1.0, 0.0}) * killing_length(metric, u, v, {1.0, 0.0});
    s.rot2 = orbit_geodesic_curvature(metric, u, v, {0.0, 1.0}) * killing_length(metric, u, v, {0.0, 1.0});
    return s;
  });
  return out;
}

RayProfile synthetic_profile(double a, double b, double c, double d, const std::vector<double>& rho_schedule) {
  check_schedule(rho_schedule);
  RayProfile out;
  for (double rho : rho_schedule) {
    if (!(rho > 1.0)) throw Error(ErrorCode::Domain, "power-log profiles need rho > 1");
    const double L = std::log(rho);
    ProfileSample s;
    s.rho = rho;
    s.sigma = std::pow(rho, a) * std::pow(L, b);
    s.tau = std::pow(rho, c) * std::pow(L, d);
    s.f = rho;
    s.sigma_rho = s.sigma * (a + b / L) / rho;
    s.tau_rho = s.tau * (c + d / L) / rho;
    s.rot1 = 1.0;
    s.rot2 = 0.0;
    out.samples.push_back(s);
  }
  return out;
}

namespace {

double target_of(Indicator i) { return i == Indicator::FOverRho ? 1.0 : 0.0; }

double indicator_value(Indicator i, const ProfileSample& s) {
  switch (i) {
    case Indicator::Tau: return s.tau;
    case Indicator::FOverRho: return s.f / s.rho;
    case Indicator::SigmaOverRho: return s.sigma / s.rho;
    case Indicator::Codim2: return s.sigma / (s.rho * s.tau);
    case Indicator::SigmaLog: return s.rho * s.sigma_rho / s.sigma;
    case Indicator::TauDerivative: return s.rho * s.rho * s.tau_rho / s.sigma;
  }
  return 0.0;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
  return A.colPivHouseholderQr().solve(y);
}

void classify(IndicatorReport& rep, const std::vector<double>& rho, const TrendRule& rule) {
  const std::size_t n = rho.size();
  const std::size_t start = std::min(n - 5, static_cast<std::size_t>(std::floor(n * (1.0 - rule.tail_fraction))));
  const std::size_t m = n - start;
  double dmax = 0.0, imax = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    dmax = std::max(dmax, std::abs(rep.values[i] - rep.target));
    imax = std::max(imax, std::abs(rep.values[i]));
  }
  Eigen::MatrixXd Q(m, 3), P(m, 3);
  Eigen::VectorXd yi(m), yd(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double L = std::log(rho[start + k]);
    const double s = 1.0 / L;
    Q.row(k) << 1.0, s, s * s;
    yi(k) = rep.values[start + k];
    P.row(k) << 1.0, L, std::log(L);
    yd(k) = std::log(std::max(std::abs(rep.values[start + k] - rep.target), 1e-300));
  }
  rep.measured_limit = least_squares(Q, yi)(0);
  if (dmax <= 1e-12 * std::max(1.0, imax) || !std::isfinite(dmax)) {
    rep.verdict = std::isfinite(dmax) ? Verdict::Converging : Verdict::Diverging;
    return;
  }
  const Eigen::VectorXd coef = least_squares(P, yd);
  rep.power_exponent = coef(1);
  rep.log_exponent = coef(2);
  const double a = rep.power_exponent, b = rep.log_exponent;
  const bool flat = std::abs(a) <= rule.power_band;
  if (a < -rule.power_band || (flat && b < -rule.log_band))
    rep.verdict = Verdict::Converging;
  else if (a > rule.power_band || (flat && b > rule.log_band))
    rep.verdict = Verdict::Diverging;
  else if (std::abs(rep.measured_limit - rep.target) > rule.limit_tol)
    rep.verdict = Verdict::Diverging;
  else
    rep.verdict = Verdict::Inconclusive;
}

}  // namespace

DiagnosticsReport limit_indicators(const RayProfile& profile, const TrendRule& rule) {
  const auto& S = profile.samples;
  if (S.size() < 10) throw Error(ErrorCode::InsufficientData, "need at least 10 samples");
  if (!(S.front().rho > 1.0)) throw Error(ErrorCode::Domain, "indicator fits need rho > 1");
  if (S.back().rho < 100.0 * S.front().rho) throw Error(ErrorCode::InsufficientData, "samples must span two decades");
  if (!(rule.tail_fraction > 0.0 && rule.tail_fraction <= 1.0))
    throw Error(ErrorCode::InvalidParameter, "tail fraction must lie in (0, 1]");
  DiagnosticsReport rep;
  rep.rule = rule;
  for (const auto& s : S) {
    if (!(s.sigma > 0.0) || !(s.f > 0.0)) throw Error(ErrorCode::InvalidParameter, "sigma and f must be positive");
    rep.rho.push_back(s.rho);
  }
  for (int k = 0; k < kIndicatorCount; ++k) {
    IndicatorReport& ir = rep.indicators[k];
    ir.which = static_cast<Indicator>(k);
    ir.target = target_of(ir.which);
    ir.informational = ir.which == Indicator::FOverRho;
    for (const auto& s : S) ir.values.push_back(indicator_value(ir.which, s));
    classify(ir, rep.rho, rule);
    if (!ir.informational && ir.verdict != Verdict::Converging) rep.failing.push_back(ir.which);
  }
  rep.all_chain_pass = rep.failing.empty();
  rep.rot1 = S.back().rot1;
  rep.rot2 = S.back().rot2;
  const bool r1 = std::abs(rep.rot1 - 1.0) < rule.limit_tol, r2 = std::abs(rep.rot2 - 1.0) < rule.limit_tol;
  rep.rotation_ambiguous = r1 == r2;
  return rep;
}

LHospitalCertificate lhospital_check(const RayProfile& profile, const TrendRule& rule) {
  LHospitalCertificate cert;
  const DiagnosticsReport rep = limit_indicators(profile, rule);
  if (!rep.all_chain_pass) {
    cert.reason = "not applicable: indicator";
    for (Indicator i : rep.failing) cert.reason += std::string(" (") + equation_label(i) + ")";
    cert.reason += " does not converge";
    return cert;
  }
  cert.applicable = true;
  for (const auto& s : profile.samples) {
    cert.ratio.push_back(s.tau / (s.sigma / s.rho));
    cert.derivative_ratio.push_back(s.tau_rho / (s.sigma_rho / s.rho - s.sigma / (s.rho * s.rho)));
  }
  for (std::size_t i = cert.ratio.size(); i-- > 0;) {
    if (!(std::abs(cert.ratio[i]) > 2.0 * std::abs(cert.derivative_ratio[i]) + 1.0)) break;
    cert.conflict_rho = profile.samples[i].rho;
  }
  cert.reason = cert.conflict_rho ? "tau/(sigma/rho) diverges while the derivative ratio stays bounded"
                                  : "no conflict observed on the sampled range";
  return cert;
}

namespace {

constexpr double kExpTol = 1e-9;

/// rho^p (log rho)^q -> 0.
bool vanishes(double p, double q) { return p < -kExpTol || (std::abs(p) <= kExpTol && q < -kExpTol); }

}  // namespace

bool constraint_holds(int label, const PowerLogFamily& f) {
  switch (label) {
    case 1: return vanishes(f.c, f.d);
    case 3: return vanishes(f.a - 1.0 - f.c, f.b - f.d);
    case 4: return std::abs(f.a) <= kExpTol;
    case 5:
      if (std::abs(f.c) > kExpTol) return vanishes(f.c + 1.0 - f.a, f.d - f.b);
      if (std::abs(f.d) > kExpTol) return vanishes(1.0 - f.a, f.d - 1.0 - f.b);
      return true;
    case 6: return vanishes(f.a - 1.0, f.b);
    default: throw Error(ErrorCode::InvalidParameter, "unknown constraint label");
  }
}

std::vector<PowerLogFamily> profile_family_search(const ExponentGrid& g, std::optional<int> dropped) {
  if (!(g.step > 0.0)) throw Error(ErrorCode::InvalidParameter, "grid step must be positive");
  if (dropped && std::find(kChainConstraints.begin(), kChainConstraints.end(), *dropped) == kChainConstraints.end())
    throw Error(ErrorCode::InvalidParameter, "unknown constraint label");
  auto axis = [&](double lo, double hi) {
    std::vector<double> v;
    const int n = static_cast<int>(std::floor((hi - lo) / g.step + 1e-9));
    for (int i = 0; i <= n; ++i) v.push_back(lo + i * g.step);
    return v;
  };
  const auto A = axis(g.a_min, g.a_max), B = axis(g.b_min, g.b_max), C = axis(g.c_min, g.c_max),
             D = axis(g.d_min, g.d_max);
  const std::size_t inner = B.size() * C.size() * D.size();
  const auto hits = parallel_map<std::vector<PowerLogFamily>>(A.size(), [&](std::size_t ia) {
    std::vector<PowerLogFamily> found;
    for (std::size_t k = 0; k < inner; ++k) {
      const PowerLogFamily f{A[ia], B[k / (C.size() * D.size())], C[(k / D.size()) % C.size()], D[k % D.size()]};
      bool ok = true;
      for (int label : kChainConstraints)
        if (label != dropped.value_or(0) && !constraint_holds(label, f)) {
          ok = false;
          break;
        }
      if (ok) found.push_back(f);
    }
    return found;
  });
  std::vector<PowerLogFamily> out;
  for (const auto& h : hits) out.insert(out.end(), h.begin(), h.end());
  return out;
}

}  // namespace toric
