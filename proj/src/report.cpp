#include "toric/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace toric {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no non-finite numbers; encode them as strings.
nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

nlohmann::ordered_json numbers(const std::vector<double>& xs) {
  auto arr = nlohmann::ordered_json::array();
  for (double x : xs) arr.push_back(number(x));
  return arr;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
  os << "r,theta,rm_norm,covering_radius\n";
  for (const auto& p : rep.points)
    os << format_double(p.r) << ',' << format_double(p.theta) << ',' << format_double(p.rm_norm) << ','
       << format_double(p.covering_radius) << '\n';
}

nlohmann::ordered_json sweep_summary_json(const SweepReport& rep) {
  nlohmann::ordered_json j;
  j["grid"] = {{"nr", rep.grid.nr},
               {"ntheta", rep.grid.ntheta},
               {"r_min", rep.grid.r_min},
               {"r_max", rep.grid.r_max},
               {"theta_min", rep.grid.theta_min}};
  j["points"] = rep.points.size();
  j["sup_rm_norm"] = number(rep.sup_rm_norm);
  j["sup_covering_radius"] = number(rep.sup_covering_radius);
  j["base_deviation"] = number(rep.base_deviation);
  return j;
}

nlohmann::ordered_json diagnostics_json(const DiagnosticsReport& rep) {
  nlohmann::ordered_json j;
  j["rho"] = numbers(rep.rho);
  j["rule"] = {{"power_band", rep.rule.power_band},
               {"log_band", rep.rule.log_band},
               {"limit_tol", rep.rule.limit_tol},
               {"tail_fraction", rep.rule.tail_fraction}};
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& ind : rep.indicators) {
    nlohmann::ordered_json b;
    b["equation"] = equation_label(ind.which);
    b["quantity"] = to_string(ind.which);
    b["target"] = ind.target;
    b["informational"] = ind.informational;
    b["verdict"] = to_string(ind.verdict);
    b["power_exponent"] = number(ind.power_exponent);
    b["log_exponent"] = number(ind.log_exponent);
    b["measured_limit"] = number(ind.measured_limit);
    b["tolerance"] = rep.rule.limit_tol;
    b["samples"] = numbers(ind.values);
    blocks.push_back(std::move(b));
  }
  j["indicators"] = std::move(blocks);
  auto failing = nlohmann::ordered_json::array();
  for (Indicator i : rep.failing) failing.push_back(equation_label(i));
  j["failing"] = std::move(failing);
  j["all_chain_pass"] = rep.all_chain_pass;
  j["rotation"] = {{"d1", number(rep.rot1)}, {"d2", number(rep.rot2)}, {"ambiguous", rep.rotation_ambiguous}};
  return j;
}

nlohmann::ordered_json certificate_json(const LHospitalCertificate& cert) {
  nlohmann::ordered_json j;
  j["applicable"] = cert.applicable;
  j["reason"] = cert.reason;
  if (cert.conflict_rho)
    j["conflict_rho"] = number(*cert.conflict_rho);
  else
    j["conflict_rho"] = nullptr;
  return j;
}

int write_indicator_plots(const std::filesystem::path& dir, const DiagnosticsReport& rep) {
  std::filesystem::create_directories(dir);
  int count = 0;
  for (const auto& ind : rep.indicators) {
    std::ofstream os(dir / (std::string("indicator_") + equation_label(ind.which) + ".dat"), std::ios::binary);
    if (!os) throw Error(ErrorCode::Config, "cannot write plot file in " + dir.string());
    os << "# rho " << to_string(ind.which) << '\n';
    for (std::size_t i = 0; i < rep.rho.size(); ++i)
      os << format_double(rep.rho[i]) << ' ' << format_double(ind.values[i]) << '\n';
    ++count;
  }
  return count;
}

void write_cone_csv(std::ostream& os, const ConeProbe& probe) {
  os << "scale,systole,second_minimum,covering_radius,base_extent\n";
  for (const auto& r : probe.rows)
    os << format_double(r.scale) << ',' << format_double(r.systole) << ',' << format_double(r.second_minimum) << ','
       << format_double(r.covering_radius) << ',' << format_double(r.base_extent) << '\n';
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace toric
