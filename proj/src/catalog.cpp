#include "toric/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace toric {

std::string to_string(const ConeDescriptor& c) {
  switch (c.kind) {
    case ConeDescriptor::Kind::R4: return "R4";
    case ConeDescriptor::Kind::R3: return "R3";
    case ConeDescriptor::Kind::HalfPlane: return "half-plane";
    case ConeDescriptor::Kind::WedgeTimesLine: {
      std::ostringstream os;
      os << "wedge(" << c.angle << ")xR";
      return os.str();
    }
  }
  return "?";
}

const char* to_string(ModelEnd::Variant v) {
  switch (v) {
    case ModelEnd::Variant::FlatR4: return "flat-r4";
    case ModelEnd::Variant::FlatQuotient: return "flat-quotient";
    case ModelEnd::Variant::SpecialKasner: return "special-kasner";
    case ModelEnd::Variant::Glued: return "glued";
    case ModelEnd::Variant::NoGap: return "nogap";
  }
  return "?";
}

ModelEnd ModelEnd::flat_r4() { return {}; }

ModelEnd ModelEnd::flat_quotient(double alpha, double sigma) {
  ModelEnd e;
  e.variant = Variant::FlatQuotient;
  e.alpha = alpha;
  e.sigma = sigma;
  e.validate();
  return e;
}

ModelEnd ModelEnd::flat_quotient(Rational alpha, double sigma) {
  if (alpha.q <= 0 || std::gcd(alpha.p, alpha.q) != 1)
    throw Error(ErrorCode::InvalidParameter, "rational alpha must be p/q in lowest terms with q > 0");
  ModelEnd e;
  e.variant = Variant::FlatQuotient;
  e.alpha = alpha.value();
  e.sigma = sigma;
  e.rational = alpha;
  e.validate();
  return e;
}

ModelEnd ModelEnd::special_kasner() {
  ModelEnd e;
  e.variant = Variant::SpecialKasner;
  return e;
}

ModelEnd ModelEnd::glued_family(GluedFamily fam) {
  ModelEnd e;
  e.variant = Variant::Glued;
  e.glued = fam;
  e.validate();
  return e;
}

ModelEnd ModelEnd::nogap_end(NoGapMetric n) {
  ModelEnd e;
  e.variant = Variant::NoGap;
  e.nogap = n;
  e.validate();
  return e;
}

void ModelEnd::validate() const {
  if (!(perturbation >= 0.0 && perturbation < 0.5))
    throw Error(ErrorCode::InvalidParameter, "perturbation must lie in [0, 0.5)");
  if (perturbation != 0.0 && variant == Variant::SpecialKasner)
    throw Error(ErrorCode::Unsupported, "perturbations apply to toric ends only");
  switch (variant) {
    case Variant::FlatQuotient:
      if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1)");
      if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidParameter, "sigma must be positive");
      break;
    case Variant::Glued: (void)glued_metric(glued); break;
    case Variant::NoGap: (void)nogap_metric(nogap); break;
    default: break;
  }
}

std::optional<ConeDescriptor> ModelEnd::expected_cone() const {
  switch (variant) {
    case Variant::FlatR4: return ConeDescriptor{ConeDescriptor::Kind::R4, 2.0 * kPi};
    case Variant::FlatQuotient:
      if (rational) return ConeDescriptor{ConeDescriptor::Kind::WedgeTimesLine, 2.0 * kPi / static_cast<double>(rational->q)};
      return ConeDescriptor{ConeDescriptor::Kind::HalfPlane, 2.0 * kPi};
    case Variant::NoGap: return ConeDescriptor{ConeDescriptor::Kind::HalfPlane, 2.0 * kPi};
    default: return std::nullopt;
  }
}

std::string ModelEnd::name() const {
  std::ostringstream os;
  os << to_string(variant);
  if (variant == Variant::FlatQuotient) {
    os << "(alpha=";
    if (rational)
      os << rational->p << "/" << rational->q;
    else
      os << alpha;
    os << ",sigma=" << sigma << ")";
  }
  return os.str();
}

std::string FlatQuotientGram::name() const {
  std::ostringstream os;
  os << "flat-quotient(alpha=" << alpha_ << ",sigma=" << sigma_ << ")";
  return os.str();
}

void SpecialKasner::check_point(double rho, double x1) const {
  MetricSource::check_point(rho, x1);
  if (!(rho >= 1.0)) throw Error(ErrorCode::Domain, "Kasner metric is evaluated on rho >= 1");
}

MetricJet kasner_jet(double rho, double x1) { return jet_at(SpecialKasner{}, rho, x1); }

namespace {

ToricMetric unperturbed(const ModelEnd& end) {
  switch (end.variant) {
    case ModelEnd::Variant::FlatR4: return ToricMetric(BaseForm::Cartesian, std::make_shared<FlatR4Gram>());
    case ModelEnd::Variant::FlatQuotient:
      return ToricMetric(BaseForm::Cartesian, std::make_shared<FlatQuotientGram>(end.alpha, end.sigma));
    case ModelEnd::Variant::Glued: return glued_metric(end.glued);
    case ModelEnd::Variant::NoGap: return nogap_metric(end.nogap);
    case ModelEnd::Variant::SpecialKasner: break;
  }
  throw Error(ErrorCode::Unsupported, "the Kasner end is not a toric metric over a half plane");
}

}  // namespace

ToricMetric toric_metric(const ModelEnd& end) {
  end.validate();
  ToricMetric m = unperturbed(end);
  if (end.perturbation == 0.0) return m;
  return ToricMetric(m.base_form(), std::make_shared<PerturbedGram>(m.gram_ptr(), end.perturbation),
                     m.generators_swapped());
}

std::shared_ptr<const MetricSource> metric_source(const ModelEnd& end) {
  if (end.variant == ModelEnd::Variant::SpecialKasner) return std::make_shared<SpecialKasner>();
  return std::make_shared<ToricMetric>(toric_metric(end));
}

GramMatrix2 gram_of_model(const ModelEnd& end, double u, double v) {
  if (!end.is_toric()) throw Error(ErrorCode::Unsupported, "Gram matrix requested for a non-toric end");
  const ToricMetric m = toric_metric(end);
  m.check_point(u, v);
  return m.gram_at(u, v);
}

namespace {

AlmostComplexStructure kasner_structure(double sign, const char* name) {
  AlmostComplexStructure J;
  J.name = name;
  J.matrix = [sign](const Jet2& rho, const Jet2&) {
    Mat4<Jet2> A = zero_mat4<Jet2>();
    A[0][3] = sign * pow(rho, -1.0 / 3.0);
    A[3][0] = -sign * pow(rho, 1.0 / 3.0);
    A[1][2] = Jet2(1.0);
    A[2][1] = Jet2(-1.0);
    return A;
  };
  return J;
}

}  // namespace

AlmostComplexStructure kasner_j1() { return kasner_structure(1.0, "J1"); }
AlmostComplexStructure kasner_j2() { return kasner_structure(-1.0, "J2"); }

AlmostComplexStructure constant_structure() {
  AlmostComplexStructure J;
  J.name = "constant";
  J.matrix = [](const Jet2&, const Jet2&) {
    Mat4<Jet2> A = zero_mat4<Jet2>();
    A[0][1] = Jet2(1.0);
    A[1][0] = Jet2(-1.0);
    A[2][3] = Jet2(1.0);
    A[3][2] = Jet2(-1.0);
    return A;
  };
  return J;
}

HermitianResidual hermitian_check(const AlmostComplexStructure& J, const MetricSource& src, double u, double v) {
  src.check_point(u, v);
  const Mat4<Jet2> A = J.matrix(Jet2::variable(u, 0), Jet2::variable(v, 1));
  const Mat4<double> g = src.components(u, v);
  double a[4][4];
  double da[4][4][4] = {};  // da[l][i][j] = d_l J^i_j
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      a[i][j] = A[i][j].value();
      da[0][i][j] = A[i][j].partial(1, 0);
      da[1][i][j] = A[i][j].partial(0, 1);
    }
  HermitianResidual res;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double sq = i == j ? 1.0 : 0.0;
      double gg = -g[i][j];
      for (int k = 0; k < 4; ++k) {
        sq += a[i][k] * a[k][j];
        for (int l = 0; l < 4; ++l) gg += g[k][l] * a[k][i] * a[l][j];
      }
      res.square = std::max(res.square, std::abs(sq));
      res.metric = std::max(res.metric, std::abs(gg));
    }
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double n = 0.0;
        for (int l = 0; l < 4; ++l) {
          n += a[l][i] * da[l][k][j] - a[l][j] * da[l][k][i];
          n -= a[k][l] * (da[i][l][j] - da[j][l][i]);
        }
        res.nijenhuis = std::max(res.nijenhuis, std::abs(n));
      }
  return res;
}

std::vector<double> geometric_scales(double base, int count) {
  if (!(base > 0.0) || count < 1) throw Error(ErrorCode::InvalidParameter, "bad geometric schedule");
  std::vector<double> s;
  for (int k = 0; k < count; ++k) s.push_back(std::pow(base, k));
  return s;
}

ConeProbe cone_probe(const ModelEnd& end, const std::vector<double>& scales) {
  const ToricMetric m = toric_metric(end);
  ConeProbe probe;
  probe.expected = end.expected_cone();
  for (double lam : scales) {
    if (!(lam > 0.0)) throw Error(ErrorCode::InvalidParameter, "scales must be positive");
    double u = lam, v = 0.0;
    if (m.base_form() == BaseForm::Polar) v = kPi / 2.0;
    if (end.variant == ModelEnd::Variant::FlatR4) u = v = lam / std::sqrt(2.0);
    m.check_point(u, v);
    GramMatrix2 G = m.gram_at(u, v);
    const double s2 = 1.0 / (lam * lam);
    G = {G.g11 * s2, G.g12 * s2, G.g22 * s2};
    const Lattice2 lat = reduce(lattice_from_gram(G));
    ConeProbeRow row;
    row.scale = lam;
    row.systole = systole(lat);
    row.second_minimum = second_minimum(lat);
    row.covering_radius = covering_radius(lat);
    row.base_extent = std::hypot(u, m.base_form() == BaseForm::Polar ? 0.0 : v) / lam;
    probe.rows.push_back(row);
  }
  return probe;
}

namespace {

using M2 = std::array<std::array<double, 2>, 2>;

M2 mul(const M2& x, const M2& y) {
  M2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

}  // namespace

double harmonic_map_residual(const ToricMetric& metric, double rho, double z) {
  if (metric.base_form() != BaseForm::Cartesian)
    throw Error(ErrorCode::Unsupported, "harmonic map residual needs the (rho, z) half plane");
  metric.check_point(rho, z);
  const Mat2<Jet2> G = metric.fiber(Jet2::variable(rho, 0), Jet2::variable(z, 1));
  const Jet2 s = sqrt(G[0][0] * G[1][1] - G[0][1] * G[1][0]);
  M2 n{}, nr{}, nz{}, nrr{}, nzz{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Jet2 e = G[i][j] / s;
      n[i][j] = e.value();
      nr[i][j] = e.partial(1, 0);
      nz[i][j] = e.partial(0, 1);
      nrr[i][j] = e.partial(2, 0);
      nzz[i][j] = e.partial(0, 2);
    }
  const double det = n[0][0] * n[1][1] - n[0][1] * n[1][0];
  const M2 ni{{{n[1][1] / det, -n[0][1] / det}, {-n[1][0] / det, n[0][0] / det}}};
  const M2 a = mul(ni, nr), b = mul(ni, nz);
  const M2 aa = mul(a, a), bb = mul(b, b), arr = mul(ni, nrr), bzz = mul(ni, nzz);
  double f = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double t = a[i][j] + rho * (arr[i][j] - aa[i][j] + bzz[i][j] - bb[i][j]);
      f += t * t;
    }
  return std::sqrt(f);
}

double harmonic_map_residual(const ModelEnd& end, double rho, double z) {
  return harmonic_map_residual(toric_metric(end), rho, z);
}

}  // namespace toric
