#include "toric/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "toric/catalog.hpp"
#include "toric/constructions.hpp"
#include "toric/descriptor.hpp"
#include "toric/obstruction.hpp"
#include "toric/report.hpp"
#include "toric/sweep.hpp"

namespace toric {

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string family;
  std::string grid;
  std::optional<double> theta_min;
  std::optional<double> r_max;
  std::optional<double> tol;
  std::string orientation = "+";
  std::string out_dir;
  std::string format = "json";
  std::uint64_t seed = 0;
  // command-specific
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::optional<double> theta;
  std::optional<double> z;
  double rho_min = 1e2;
  double rho_max = 1e6;
  int samples = 41;
  int count = 21;
  double base = 2.0;
  int points = 50;
};

class Sink {
 public:
  Sink(const Options& o, const std::string& command, std::ostream& out) : out_(out) {
    std::string dir = o.out_dir;
    if (dir.empty())
      if (const char* env = std::getenv("TORIC_OUT_DIR")) dir = env;
    if (!dir.empty()) {
      dir_ = dir;
      std::filesystem::create_directories(dir_);
      path_ = dir_ / (command + "." + o.format);
      file_.open(path_, std::ios::binary);
      if (!file_) throw Error(ErrorCode::Config, "cannot write " + path_.string());
    }
  }
  std::ostream& data() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }
  bool to_file() const { return file_.is_open(); }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::ostream& out_;
  std::ofstream file_;
  std::filesystem::path dir_;
  std::filesystem::path path_;
};

FamilyDescriptor resolve_family(const Options& o, const ModelEnd& fallback) {
  FamilyDescriptor d;
  if (o.family.empty()) {
    d = default_descriptor(fallback);
  } else if (!o.family.empty() && o.family.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(o.family);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Config, std::string("malformed inline descriptor: ") + e.what());
    }
    d = parse_descriptor(j);
  } else {
    d = load_descriptor(o.family);
  }
  if (!o.grid.empty()) {
    int nu = 0, nv = 0;
    char x = 0;
    std::istringstream is(o.grid);
    if (!(is >> nu >> x >> nv) || (x != 'x' && x != 'X') || nu < 1 || nv < 1 || !is.eof())
      throw Error(ErrorCode::Config, "--grid expects NxM");
    d.nu = nu;
    d.nv = nv;
  }
  if (o.theta_min) {
    if (d.chart != ChartTag::PolarHalfPlane) throw Error(ErrorCode::Config, "--theta-min needs a polar family");
    if (!(*o.theta_min > 0.0 && *o.theta_min < kPi / 2)) throw Error(ErrorCode::Config, "--theta-min out of range");
    d.domain.v_min = *o.theta_min;
    d.domain.v_max = kPi - *o.theta_min;
  }
  if (o.r_max) {
    if (!(*o.r_max > d.domain.u_min)) throw Error(ErrorCode::Config, "--r-max below the inner radius");
    d.domain.u_max = *o.r_max;
  }
  return d;
}

int orientation_of(const Options& o) { return o.orientation == "-" ? -1 : 1; }

ojson header(const std::string& command, const FamilyDescriptor& d, const Options& o) {
  ojson j;
  j["manifest"] = manifest_json(make_manifest(command, d, o.seed));
  j["family"] = descriptor_json(d);
  return j;
}

int cmd_flatness(const Options& o, std::ostream& out, std::ostream& err) {
  const FamilyDescriptor d = resolve_family(o, ModelEnd::flat_quotient(0.3, 0.5));
  const double tol = o.tol.value_or(d.tol.flatness);
  const auto src = metric_source(d.end);
  const auto pts = interior_grid(d);
  struct Cell {
    double rm, ric;
  };
  const auto cells = parallel_map<Cell>(pts.size(), [&](std::size_t i) {
    const MetricJet jet = whiten_fiber(jet_at(*src, pts[i].first, pts[i].second));
    const CurvaturePacket p = riemann(jet);
    return Cell{p.rm_norm, ricci_norm(p, jet)};
  });
  double max_rm = 0.0, max_ric = 0.0;
  for (const auto& c : cells) {
    max_rm = std::max(max_rm, c.rm);
    max_ric = std::max(max_ric, c.ric);
  }
  const bool pass = max_rm < tol;
  Sink sink(o, "flatness", out);
  if (o.format == "csv") {
    sink.data() << "u,v,rm_norm,ricci_norm\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
      sink.data() << format_double(pts[i].first) << ',' << format_double(pts[i].second) << ','
                  << format_double(cells[i].rm) << ',' << format_double(cells[i].ric) << '\n';
  } else {
    ojson j = header("flatness", d, o);
    j["max_rm_norm"] = max_rm;
    j["max_ricci_norm"] = max_ric;
    j["tolerance"] = tol;
    j["pass"] = pass;
    sink.data() << dump(j);
  }
  err << "flatness " << d.name << ": max rm_norm " << format_double(max_rm) << ", max |Ric| "
      << format_double(max_ric) << (pass ? " -> flat" : " -> not flat") << '\n';
  return pass ? kExitPass : kExitFail;
}

int cmd_collapse(const Options& o, std::ostream& out, std::ostream& err) {
  const FamilyDescriptor d = resolve_family(o, ModelEnd::glued_family({}));
  if (d.end.variant != ModelEnd::Variant::Glued) throw Error(ErrorCode::Config, "collapse needs a glued family");
  if (d.schedule.size() < 2) throw Error(ErrorCode::Config, "collapse needs at least two schedule rows");
  SweepGrid grid{d.nu, d.nv, d.domain.u_min, d.domain.u_max, d.domain.v_min};
  std::vector<SweepReport> reps;
  for (const auto& [s, t] : d.schedule) {
    GluedFamily f = d.end.glued;
    f.sigma = s;
    f.tau = t;
    ModelEnd e = ModelEnd::glued_family(f);
    e.perturbation = d.end.perturbation;
    reps.push_back(curvature_sweep(toric_metric(e), grid));
  }
  bool pass = true;
  for (std::size_t i = 1; i < reps.size(); ++i)
    pass = pass && reps[i].sup_rm_norm < reps[i - 1].sup_rm_norm &&
           reps[i].sup_covering_radius < reps[i - 1].sup_covering_radius;
  Sink sink(o, "collapse", out);
  if (o.format == "csv") {
    sink.data() << "step,sigma,tau,sup_rm_norm,sup_covering_radius,base_deviation\n";
    for (std::size_t i = 0; i < reps.size(); ++i)
      sink.data() << i << ',' << format_double(d.schedule[i].first) << ',' << format_double(d.schedule[i].second)
                  << ',' << format_double(reps[i].sup_rm_norm) << ',' << format_double(reps[i].sup_covering_radius)
                  << ',' << format_double(reps[i].base_deviation) << '\n';
  } else {
    ojson j = header("collapse", d, o);
    auto rows = ojson::array();
    for (std::size_t i = 0; i < reps.size(); ++i) {
      ojson r = sweep_summary_json(reps[i]);
      r["sigma"] = d.schedule[i].first;
      r["tau"] = d.schedule[i].second;
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["decreasing"] = pass;
    sink.data() << dump(j);
  }
  err << "collapse: sup rm_norm and sup covering radius " << (pass ? "strictly decreasing" : "not both decreasing")
      << '\n';
  return pass ? kExitPass : kExitFail;
}

int cmd_nogap(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.epsilons.empty()) throw Error(ErrorCode::Config, "--epsilon needs at least one value");
  AsymptoticSchedule sched;
  if (o.r_max) sched.r_max = *o.r_max;
  if (o.theta_min) sched.theta_min = *o.theta_min;
  if (!(sched.r_max > sched.r_min)) throw Error(ErrorCode::Config, "--r-max must exceed 100");
  struct Row {
    double eps, est, slope;
  };
  std::vector<Row> rows;
  for (double e : o.epsilons) {
    if (!(e > 0.0)) throw Error(ErrorCode::Config, "epsilon must be positive");
    const auto est = asymptotic_curvature_estimate(nogap_metric({e, 10.0}), sched);
    rows.push_back({e, est.estimate, est.tail_slope});
  }
  double lo = INFINITY, hi = 0.0;
  bool slopes = true;
  for (const auto& r : rows) {
    lo = std::min(lo, r.est / r.eps);
    hi = std::max(hi, r.est / r.eps);
    slopes = slopes && std::abs(r.slope) <= 0.1;
  }
  const bool pass = hi <= 3.0 * lo && slopes;
  Sink sink(o, "nogap", out);
  if (o.format == "csv") {
    sink.data() << "epsilon,estimate,tail_slope,ratio\n";
    for (const auto& r : rows)
      sink.data() << format_double(r.eps) << ',' << format_double(r.est) << ',' << format_double(r.slope) << ','
                  << format_double(r.est / r.eps) << '\n';
  } else {
    ojson j;
    j["manifest"] = {{"command", "nogap"}, {"seed", o.seed}, {"tool_version", kToolVersion}};
    j["schedule"] = {{"r_min", sched.r_min}, {"r_max", sched.r_max}, {"count", sched.count},
                     {"theta_min", sched.theta_min}, {"ntheta", sched.ntheta}};
    auto arr = ojson::array();
    for (const auto& r : rows)
      arr.push_back({{"epsilon", r.eps}, {"estimate", r.est}, {"tail_slope", r.slope}, {"ratio", r.est / r.eps}});
    j["rows"] = std::move(arr);
    j["ratio_spread"] = hi / lo;
    j["pass"] = pass;
    sink.data() << dump(j);
  }
  err << "nogap: A/epsilon spread " << format_double(hi / lo) << (pass ? " -> linear in epsilon" : " -> not linear")
      << '\n';
  return pass ? kExitPass : kExitFail;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const FamilyDescriptor d = resolve_family(o, ModelEnd::special_kasner());
  const int orient = orientation_of(o);
  const double tol = o.tol.value_or(d.tol.type);
  const auto src = metric_source(d.end);
  const auto pts = interior_grid(d);
  const auto kinds = parallel_map<int>(pts.size(), [&](std::size_t i) {
    const CurvaturePacket p = curvature(whiten_fiber(jet_at(*src, pts[i].first, pts[i].second)), orient);
    const CurvatureType t = tol > 0.0 ? classify_type(p.wplus, tol) : classify_type(p.wplus);
    return static_cast<int>(t.kind);
  });
  std::array<int, 3> hist{};
  for (int k : kinds) ++hist[k];
  const std::array<TypeKind, 3> all{TypeKind::TypeI, TypeKind::TypeII, TypeKind::TypeIII};
  Sink sink(o, "classify", out);
  if (o.format == "csv") {
    sink.data() << "type,count,fraction\n";
    for (int k = 0; k < 3; ++k)
      sink.data() << to_string(all[k]) << ',' << hist[k] << ',' << format_double(double(hist[k]) / pts.size())
                  << '\n';
  } else {
    ojson j = header("classify", d, o);
    j["orientation"] = orient > 0 ? "+" : "-";
    for (int k = 0; k < 3; ++k)
      j["histogram"][to_string(all[k])] = {{"count", hist[k]}, {"fraction", double(hist[k]) / pts.size()}};
    sink.data() << dump(j);
  }
  const int mode = static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
  err << "classify " << d.name << " (" << o.orientation << "): majority " << to_string(all[mode]) << " ("
      << hist[mode] << "/" << pts.size() << ")\n";
  return kExitPass;
}

int cmd_obstruct(const Options& o, std::ostream& out, std::ostream& err) {
  const FamilyDescriptor d = resolve_family(o, ModelEnd::nogap_end({}));
  const ToricMetric m = toric_metric(d.end);
  Ray ray;
  if (m.base_form() == BaseForm::Polar) {
    if (o.z) throw Error(ErrorCode::Config, "--z needs a Cartesian family");
    ray = {Ray::Kind::FixedTheta, o.theta.value_or(kPi / 2.0)};
  } else {
    if (o.theta) throw Error(ErrorCode::Config, "--theta needs a polar family");
    ray = {Ray::Kind::FixedZ, o.z.value_or(0.0)};
  }
  const double rho_max = o.r_max.value_or(o.rho_max);
  const RayProfile prof = extract_profile(m, ray, geometric_schedule(o.rho_min, rho_max, o.samples));
  const DiagnosticsReport rep = limit_indicators(prof);
  const LHospitalCertificate cert = lhospital_check(prof);
  Sink sink(o, "obstruct", out);
  if (o.format == "csv") {
    sink.data() << "rho";
    for (const auto& ind : rep.indicators) sink.data() << ",eq" << equation_label(ind.which);
    sink.data() << '\n';
    for (std::size_t i = 0; i < rep.rho.size(); ++i) {
      sink.data() << format_double(rep.rho[i]);
      for (const auto& ind : rep.indicators) sink.data() << ',' << format_double(ind.values[i]);
      sink.data() << '\n';
    }
  } else {
    ojson j = header("obstruct", d, o);
    j["ray"] = {{"kind", ray.kind == Ray::Kind::FixedTheta ? "theta" : "z"}, {"value", ray.value}};
    j["diagnostics"] = diagnostics_json(rep);
    j["lhospital"] = certificate_json(cert);
    sink.data() << dump(j);
  }
  if (sink.to_file()) write_indicator_plots(sink.dir(), rep);
  err << "obstruct " << d.name << ":";
  for (const auto& ind : rep.indicators)
    err << " (" << equation_label(ind.which) << ") " << to_string(ind.verdict) << (ind.informational ? "*" : "");
  err << "; failing:";
  if (rep.failing.empty()) err << " none";
  for (Indicator i : rep.failing) err << " (" << equation_label(i) << ")";
  err << '\n';
  return kExitPass;
}

int cmd_probe_cone(const Options& o, std::ostream& out, std::ostream& err) {
  const FamilyDescriptor d = resolve_family(o, ModelEnd::flat_quotient(Rational{1, 2}, 1.0));
  const ConeProbe probe = cone_probe(d.end, geometric_scales(o.base, o.count));
  Sink sink(o, "probe-cone", out);
  if (o.format == "csv") {
    write_cone_csv(sink.data(), probe);
  } else {
    ojson j = header("probe-cone", d, o);
    j["expected_cone"] = probe.expected ? ojson(to_string(*probe.expected)) : ojson(nullptr);
    auto rows = ojson::array();
    for (const auto& r : probe.rows)
      rows.push_back({{"scale", r.scale},
                      {"systole", r.systole},
                      {"second_minimum", r.second_minimum},
                      {"covering_radius", r.covering_radius},
                      {"base_extent", r.base_extent}});
    j["rows"] = std::move(rows);
    sink.data() << dump(j);
  }
  const auto& last = probe.rows.back();
  err << "probe-cone " << d.name << ": at scale " << format_double(last.scale) << " systole "
      << format_double(last.systole) << ", second minimum " << format_double(last.second_minimum)
      << ", covering radius " << format_double(last.covering_radius) << '\n';
  return kExitPass;
}

int cmd_kasner_check(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.points < 1) throw Error(ErrorCode::Config, "--points must be positive");
  const double tol = o.tol.value_or(1e-8);
  const SpecialKasner K;
  const auto rhos = o.points == 1 ? std::vector<double>{2.0} : geometric_schedule(1.0, 10.0, o.points);
  struct Row {
    double ricci, gap_plus, gap_minus, norm_plus, conformal, j1, j2;
    bool type2;
  };
  const auto rows = parallel_map<Row>(rhos.size(), [&](std::size_t i) {
    const double rho = rhos[i], x1 = 0.37 * static_cast<double>(i);
    const MetricJet jet = jet_at(K, rho, x1);
    const CurvaturePacket p = curvature(jet, 1), q = curvature(jet, -1);
    const CurvatureType tp = classify_type(p.wplus), tq = classify_type(q.wplus);
    const double lam = std::sqrt(24.0) * frobenius(p.wplus);
    const PositivityResidual pr = scalar_positivity_residual(K, rho, x1, 1);
    const double conformal = std::abs(pr.scalar_conformal * pr.scalar_conformal - std::cbrt(lam * lam)) /
                             std::cbrt(lam * lam);
    auto worst = [](const HermitianResidual& h) { return std::max({h.square, h.metric, h.nijenhuis}); };
    auto gap = [](const CurvatureType& t) {
      const auto& e = t.eigenvalues;
      return std::min(e[1] - e[0], e[2] - e[1]);
    };
    return Row{ricci_norm(p, jet),
               gap(tp),
               gap(tq),
               frobenius(p.wplus),
               conformal,
               worst(hermitian_check(kasner_j1(), K, rho, x1)),
               worst(hermitian_check(kasner_j2(), K, rho, x1)),
               tp.kind == TypeKind::TypeII && tq.kind == TypeKind::TypeII};
  });
  Row worst{0, 0, 0, INFINITY, 0, 0, 0, true};
  for (const auto& r : rows) {
    worst.ricci = std::max(worst.ricci, r.ricci);
    worst.gap_plus = std::max(worst.gap_plus, r.gap_plus);
    worst.gap_minus = std::max(worst.gap_minus, r.gap_minus);
    worst.norm_plus = std::min(worst.norm_plus, r.norm_plus);
    worst.conformal = std::max(worst.conformal, r.conformal);
    worst.j1 = std::max(worst.j1, r.j1);
    worst.j2 = std::max(worst.j2, r.j2);
    worst.type2 = worst.type2 && r.type2;
  }
  const bool pass = worst.ricci < tol && worst.gap_plus < tol && worst.gap_minus < tol && worst.norm_plus > 0.0 &&
                    worst.type2 && worst.conformal < 1e-6 && worst.j1 < tol && worst.j2 < tol;
  Sink sink(o, "kasner-check", out);
  if (o.format == "csv") {
    sink.data() << "rho,ricci_norm,gap_plus,gap_minus,wplus_norm,conformal_rel,j1,j2,type_ii\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      sink.data() << format_double(rhos[i]) << ',' << format_double(r.ricci) << ',' << format_double(r.gap_plus)
                  << ',' << format_double(r.gap_minus) << ',' << format_double(r.norm_plus) << ','
                  << format_double(r.conformal) << ',' << format_double(r.j1) << ',' << format_double(r.j2) << ','
                  << (r.type2 ? 1 : 0) << '\n';
    }
  } else {
    ojson j;
    j["manifest"] = {{"command", "kasner-check"}, {"points", o.points}, {"seed", o.seed},
                     {"tool_version", kToolVersion}};
    j["max_ricci_norm"] = worst.ricci;
    j["max_pair_gap_plus"] = worst.gap_plus;
    j["max_pair_gap_minus"] = worst.gap_minus;
    j["min_wplus_norm"] = worst.norm_plus;
    j["all_type_ii"] = worst.type2;
    j["max_conformal_relative"] = worst.conformal;
    j["max_j1_residual"] = worst.j1;
    j["max_j2_residual"] = worst.j2;
    j["pass"] = pass;
    sink.data() << dump(j);
  }
  err << "kasner-check: " << (pass ? "Ricci-flat, Type II under both orientations, hermitian for J1 and J2"
                                   : "verification failed")
      << '\n';
  return pass ? kExitPass : kExitFail;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Config:
    case ErrorCode::InvalidParameter:
    case ErrorCode::InvalidTolerance:
    case ErrorCode::Unsupported:
    case ErrorCode::Domain:
    case ErrorCode::AxisEvaluation:
    case ErrorCode::InsufficientData: return kExitUsage;
    default: return kExitFail;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toric 4-metric laboratory", args.empty() ? "toriclab" : args.front()};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--family", o.family, "family descriptor: JSON file or inline JSON object");
    sub->add_option("--grid", o.grid, "sampling grid NxM");
    sub->add_option("--theta-min", o.theta_min, "polar band [theta_min, pi - theta_min]");
    sub->add_option("--r-max", o.r_max, "outer radius");
    sub->add_option("--tol", o.tol, "tolerance override")->check(CLI::PositiveNumber);
    sub->add_option("--orientation", o.orientation, "orientation + or -")->check(CLI::IsMember({"+", "-"}));
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "seed recorded in the manifest");
  };
  std::map<std::string, int (*)(const Options&, std::ostream&, std::ostream&)> handlers;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&, std::ostream&, std::ostream&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    handlers[name] = fn;
    return sub;
  };
  add("flatness", "max rm_norm over the family grid", cmd_flatness);
  add("collapse", "sweeps along a glued (sigma, tau) schedule", cmd_collapse);
  add("nogap", "asymptotic curvature of the no-gap metrics", cmd_nogap)
      ->add_option("--epsilon", o.epsilons, "epsilon values")
      ->delimiter(',');
  add("classify", "Type I/II/III histogram of W+", cmd_classify);
  CLI::App* ob = add("obstruct", "limit indicators along a ray", cmd_obstruct);
  ob->add_option("--theta", o.theta, "polar ray angle");
  ob->add_option("--z", o.z, "Cartesian ray height");
  ob->add_option("--rho-min", o.rho_min, "first sample")->check(CLI::PositiveNumber);
  ob->add_option("--rho-max", o.rho_max, "last sample")->check(CLI::PositiveNumber);
  ob->add_option("--samples", o.samples, "number of samples")->check(CLI::Range(2, 100000));
  CLI::App* pc = add("probe-cone", "rescaled fiber lattices along lambda_k = base^k", cmd_probe_cone);
  pc->add_option("--count", o.count, "number of scales")->check(CLI::Range(1, 200));
  pc->add_option("--base", o.base, "scale ratio")->check(CLI::PositiveNumber);
  add("kasner-check", "Ricci, Weyl type, conformal and hermitian checks", cmd_kasner_check)
      ->add_option("--points", o.points, "sample count");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace toric
