#include "toric/descriptor.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace toric {

namespace {

using nlohmann::json;

ChartTag natural_chart(const ModelEnd& end) {
  switch (end.variant) {
    case ModelEnd::Variant::SpecialKasner: return ChartTag::Generic;
    case ModelEnd::Variant::Glued:
    case ModelEnd::Variant::NoGap: return ChartTag::PolarHalfPlane;
    default: return ChartTag::CartesianHalfPlane;
  }
}

ChartTag parse_chart(const std::string& s) {
  if (s == "cartesian") return ChartTag::CartesianHalfPlane;
  if (s == "polar") return ChartTag::PolarHalfPlane;
  if (s == "generic") return ChartTag::Generic;
  throw Error(ErrorCode::Config, "unknown chart '" + s + "'");
}

const char* chart_name(ChartTag c) {
  switch (c) {
    case ChartTag::CartesianHalfPlane: return "cartesian";
    case ChartTag::PolarHalfPlane: return "polar";
    case ChartTag::Generic: return "generic";
  }
  return "?";
}

ModelEnd::Variant parse_variant(const std::string& s) {
  for (auto v : {ModelEnd::Variant::FlatR4, ModelEnd::Variant::FlatQuotient, ModelEnd::Variant::SpecialKasner,
                 ModelEnd::Variant::Glued, ModelEnd::Variant::NoGap})
    if (s == to_string(v)) return v;
  throw Error(ErrorCode::Config, "unknown variant '" + s + "'");
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw Error(ErrorCode::Config, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::Config, std::string(what) + " must be a JSON object");
}

}  // namespace

FamilyDescriptor default_descriptor(const ModelEnd& end) {
  FamilyDescriptor d;
  d.end = end;
  d.name = end.name();
  d.chart = natural_chart(end);
  switch (end.variant) {
    case ModelEnd::Variant::FlatR4: d.domain = {0.5, 5.0, 0.5, 5.0}; break;
    case ModelEnd::Variant::FlatQuotient: d.domain = {0.5, 5.0, -3.0, 3.0}; break;
    case ModelEnd::Variant::SpecialKasner: d.domain = {1.0, 10.0, 0.0, 2.0 * kPi}; break;
    case ModelEnd::Variant::Glued:
      d.domain = {end.glued.r_min, end.glued.r_max, 0.05, kPi - 0.05};
      d.nu = 16;
      d.nv = 32;
      for (int k = 3; k <= 7; ++k) d.schedule.emplace_back(std::pow(4.0, -k), std::pow(2.0, -k));
      break;
    case ModelEnd::Variant::NoGap:
      d.domain = {end.nogap.r0, 1e6, 0.05, kPi - 0.05};
      d.nu = 25;
      d.nv = 41;
      break;
  }
  return d;
}

std::vector<std::pair<double, double>> interior_grid(const FamilyDescriptor& d) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(d.nu) * static_cast<std::size_t>(d.nv));
  for (int i = 0; i < d.nu; ++i)
    for (int j = 0; j < d.nv; ++j)
      pts.emplace_back(d.domain.u_min + (i + 0.5) * (d.domain.u_max - d.domain.u_min) / d.nu,
                       d.domain.v_min + (j + 0.5) * (d.domain.v_max - d.domain.v_min) / d.nv);
  return pts;
}

FamilyDescriptor parse_descriptor(const json& j) {
  require_object(j, "descriptor");
  if (!j.contains("variant") || !j["variant"].is_string()) throw Error(ErrorCode::Config, "missing 'variant'");
  ModelEnd end;
  end.variant = parse_variant(j["variant"].get<std::string>());
  const json params = j.value("params", json::object());
  require_object(params, "'params'");
  try {
    switch (end.variant) {
      case ModelEnd::Variant::FlatQuotient:
        if (params.contains("alpha_p") || params.contains("alpha_q")) {
          const Rational q{static_cast<long>(number_or(params, "alpha_p", 0)),
                           static_cast<long>(number_or(params, "alpha_q", 1))};
          end = ModelEnd::flat_quotient(q, number_or(params, "sigma", 1.0));
        } else {
          end = ModelEnd::flat_quotient(number_or(params, "alpha", 0.0), number_or(params, "sigma", 1.0));
        }
        break;
      case ModelEnd::Variant::Glued: {
        GluedFamily f;
        f.sigma = number_or(params, "sigma", f.sigma);
        f.tau = number_or(params, "tau", f.tau);
        f.r_min = number_or(params, "r_min", f.r_min);
        f.r_max = number_or(params, "r_max", f.r_max);
        end = ModelEnd::glued_family(f);
        break;
      }
      case ModelEnd::Variant::NoGap: {
        NoGapMetric n;
        n.epsilon = number_or(params, "epsilon", n.epsilon);
        n.r0 = number_or(params, "r0", n.r0);
        end = ModelEnd::nogap_end(n);
        break;
      }
      default: break;
    }
    end.perturbation = number_or(params, "perturbation", 0.0);
    end.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("invalid parameters: ") + e.what());
  }

  FamilyDescriptor d = default_descriptor(end);
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw Error(ErrorCode::Config, "'name' must be a string");
    d.name = j["name"].get<std::string>();
  }
  if (j.contains("chart")) {
    if (!j["chart"].is_string()) throw Error(ErrorCode::Config, "'chart' must be a string");
    if (parse_chart(j["chart"].get<std::string>()) != d.chart)
      throw Error(ErrorCode::Config, std::string("variant ") + to_string(end.variant) + " lives on the " +
                                         chart_name(d.chart) + " chart");
  }
  if (j.contains("domain")) {
    const json& dom = j["domain"];
    require_object(dom, "'domain'");
    auto range = [&](const char* key, double& lo, double& hi) {
      if (!dom.contains(key)) return;
      const json& r = dom[key];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw Error(ErrorCode::Config, std::string("domain '") + key + "' must be [lo, hi]");
      lo = r[0].get<double>();
      hi = r[1].get<double>();
      if (!(hi > lo)) throw Error(ErrorCode::Config, std::string("domain '") + key + "' is empty");
    };
    range("u", d.domain.u_min, d.domain.u_max);
    range("v", d.domain.v_min, d.domain.v_max);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer())
      throw Error(ErrorCode::Config, "'grid' must be [nu, nv]");
    d.nu = g[0].get<int>();
    d.nv = g[1].get<int>();
    if (d.nu < 1 || d.nv < 1) throw Error(ErrorCode::Config, "grid sizes must be positive");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    require_object(t, "'tolerances'");
    d.tol.flatness = number_or(t, "flatness", d.tol.flatness);
    d.tol.ricci = number_or(t, "ricci", d.tol.ricci);
    d.tol.type = number_or(t, "type", d.tol.type);
    if (!(d.tol.flatness > 0.0) || !(d.tol.ricci > 0.0) || d.tol.type < 0.0)
      throw Error(ErrorCode::Config, "tolerances must be positive");
  }
  if (params.contains("schedule")) {
    if (end.variant != ModelEnd::Variant::Glued) throw Error(ErrorCode::Config, "'schedule' applies to glued only");
    d.schedule.clear();
    for (const auto& row : params["schedule"]) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        throw Error(ErrorCode::Config, "schedule rows must be [sigma, tau]");
      const double s = row[0].get<double>(), t = row[1].get<double>();
      if (!(s > 0.0) || !(t > 0.0 && t < 1.0)) throw Error(ErrorCode::Config, "schedule needs sigma > 0, 0 < tau < 1");
      d.schedule.emplace_back(s, t);
    }
  }

  // the sampled box must lie inside the metric's domain
  const auto src = metric_source(d.end);
  const auto pts = interior_grid(d);
  try {
    src->check_point(pts.front().first, pts.front().second);
    src->check_point(pts.back().first, pts.back().second);
    src->check_point(pts.front().first, pts.back().second);
    src->check_point(pts.back().first, pts.front().second);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("domain leaves the metric's domain: ") + e.what());
  }
  return d;
}

FamilyDescriptor load_descriptor(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Config, "cannot open descriptor " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_descriptor(j);
}

nlohmann::ordered_json descriptor_json(const FamilyDescriptor& d) {
  nlohmann::ordered_json j;
  j["name"] = d.name;
  j["variant"] = to_string(d.end.variant);
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  switch (d.end.variant) {
    case ModelEnd::Variant::FlatQuotient:
      if (d.end.rational) {
        p["alpha_p"] = d.end.rational->p;
        p["alpha_q"] = d.end.rational->q;
      } else {
        p["alpha"] = d.end.alpha;
      }
      p["sigma"] = d.end.sigma;
      break;
    case ModelEnd::Variant::Glued:
      p["sigma"] = d.end.glued.sigma;
      p["tau"] = d.end.glued.tau;
      p["r_min"] = d.end.glued.r_min;
      p["r_max"] = d.end.glued.r_max;
      p["schedule"] = nlohmann::ordered_json::array();
      for (const auto& [s, t] : d.schedule) p["schedule"].push_back({s, t});
      break;
    case ModelEnd::Variant::NoGap:
      p["epsilon"] = d.end.nogap.epsilon;
      p["r0"] = d.end.nogap.r0;
      break;
    default: break;
  }
  if (d.end.perturbation != 0.0) p["perturbation"] = d.end.perturbation;
  j["params"] = std::move(p);
  j["chart"] = chart_name(d.chart);
  j["domain"] = {{"u", {d.domain.u_min, d.domain.u_max}}, {"v", {d.domain.v_min, d.domain.v_max}}};
  j["grid"] = {d.nu, d.nv};
  j["tolerances"] = {{"flatness", d.tol.flatness}, {"ricci", d.tol.ricci}, {"type", d.tol.type}};
  return j;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest make_manifest(const std::string& command, const FamilyDescriptor& d, std::uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.descriptor_hash = fnv1a_hex(descriptor_json(d).dump());
  m.nu = d.nu;
  m.nv = d.nv;
  m.seed = seed;
  m.tool_version = kToolVersion;
  return m;
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  return {{"command", m.command}, {"descriptor_hash", m.descriptor_hash}, {"grid", {m.nu, m.nv}},
          {"seed", m.seed},       {"tool_version", m.tool_version}};
}

}  // namespace toric
