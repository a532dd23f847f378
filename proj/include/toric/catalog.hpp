#pragma once

// Concrete model ends: flat R^4, the flat quotients X_{alpha,sigma} of C^2 by
// (z1, z2) -> (z1 + sigma, e^{2 pi i alpha} z2), the special Kasner metric and
// its complex structures, and asymptotic-cone probes.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toric/constructions.hpp"
#include "toric/toric_metric.hpp"

namespace toric {

/// Exact rational p/q, declared by the caller.
struct Rational {
  long p = 0;
  long q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

struct ConeDescriptor {
  enum class Kind { R4, R3, HalfPlane, WedgeTimesLine };
  Kind kind = Kind::R4;
  double angle = 2.0 * kPi;  // WedgeTimesLine only, in (0, 2 pi]
};

std::string to_string(const ConeDescriptor& c);

struct ModelEnd {
  enum class Variant { FlatR4, FlatQuotient, SpecialKasner, Glued, NoGap };
  Variant variant = Variant::FlatR4;
  double alpha = 0.0;              // FlatQuotient
  double sigma = 1.0;              // FlatQuotient
  std::optional<Rational> rational;  // FlatQuotient, rationality of alpha
  GluedFamily glued;
  NoGapMetric nogap;
  double perturbation = 0.0;  // toric variants: amplitude of a smooth bump on the fiber, in [0, 0.5)

  static ModelEnd flat_r4();
  /// Irrational (or undeclared) alpha.
  static ModelEnd flat_quotient(double alpha, double sigma);
  static ModelEnd flat_quotient(Rational alpha, double sigma);
  static ModelEnd special_kasner();
  static ModelEnd glued_family(GluedFamily fam);
  static ModelEnd nogap_end(NoGapMetric n);

  /// Throws InvalidParameter when parameters leave their declared ranges.
  void validate() const;
  bool is_toric() const { return variant != Variant::SpecialKasner; }
  /// Expected asymptotic cone, when the end has one.
  std::optional<ConeDescriptor> expected_cone() const;
  std::string name() const;
};

const char* to_string(ModelEnd::Variant v);

/// G = [[rho^2, alpha rho^2], [alpha rho^2, alpha^2 rho^2 + sigma^2]] in the
/// (rho, z) half plane; d1 is the rotation, d2 the screw motion.
class FlatQuotientGram : public GramFieldBase<FlatQuotientGram> {
 public:
  FlatQuotientGram(double alpha, double sigma) : alpha_(alpha), sigma_(sigma) {}
  template <class T>
  Mat2<T> eval(const T& rho, const T&) const {
    const T r2 = rho * rho;
    return {{{r2, r2 * alpha_}, {r2 * alpha_, r2 * (alpha_ * alpha_) + sigma_ * sigma_}}};
  }
  ChartTag chart() const override { return ChartTag::CartesianHalfPlane; }
  std::string name() const override;

 private:
  double alpha_;
  double sigma_;
};

/// C x C in bipolar coordinates (rho1, rho2): G = diag(rho1^2, rho2^2).
class FlatR4Gram : public GramFieldBase<FlatR4Gram> {
 public:
  template <class T>
  Mat2<T> eval(const T& u, const T& v) const {
    return {{{u * u, T(0.0)}, {T(0.0), v * v}}};
  }
  ChartTag chart() const override { return ChartTag::CartesianHalfPlane; }
  std::string name() const override { return "flat-r4"; }
  BaseDomain domain() const override { return {0.0, INFINITY, 0.0, INFINITY}; }
};

/// P G P^T with P = diag(1 + amp sin(u) cos(v), 1 + amp cos(2u) sin(v) / 2):
/// a generic, non-Einstein deformation of another Gram field that keeps it
/// positive definite.
class PerturbedGram : public GramFieldBase<PerturbedGram> {
 public:
  PerturbedGram(std::shared_ptr<const GramField> base, double amplitude)
      : base_(std::move(base)), amp_(amplitude) {}
  template <class T>
  Mat2<T> eval(const T& u, const T& v) const {
    using std::cos;
    using std::sin;
    Mat2<T> G = base_->gram(u, v);
    const T p1 = 1.0 + amp_ * sin(u) * cos(v);
    const T p2 = 1.0 + 0.5 * amp_ * cos(2.0 * u) * sin(v);
    G[0][0] = G[0][0] * p1 * p1;
    G[0][1] = G[0][1] * p1 * p2;
    G[1][0] = G[0][1];
    G[1][1] = G[1][1] * p2 * p2;
    return G;
  }
  ChartTag chart() const override { return base_->chart(); }
  std::string name() const override { return "perturbed " + base_->name(); }
  BaseDomain domain() const override { return base_->domain(); }

 private:
  std::shared_ptr<const GramField> base_;
  double amp_;
};

/// d rho^2 + rho^{4/3} dx1^2 + rho^{4/3} dx2^2 + rho^{-2/3} dx3^2 in the
/// coordinates (rho, x1, x2, x3); the second chart coordinate is x1.
class SpecialKasner : public MetricSourceBase<SpecialKasner> {
 public:
  template <class T>
  Mat4<T> eval(const T& rho, const T&) const {
    using std::pow;
    Mat4<T> g = zero_mat4<T>();
    g[0][0] = T(1.0);
    g[1][1] = pow(rho, 4.0 / 3.0);
    g[2][2] = g[1][1];
    g[3][3] = pow(rho, -2.0 / 3.0);
    return g;
  }
  /// rho >= 1; evaluation below is a domain error.
  void check_point(double rho, double x1) const override;
};

/// Throws Domain when rho < 1.
MetricJet kasner_jet(double rho, double x1 = 0.0);

/// Gram matrix of a toric end at a base point; Unsupported for Kasner.
GramMatrix2 gram_of_model(const ModelEnd& end, double u, double v);

ToricMetric toric_metric(const ModelEnd& end);
std::shared_ptr<const MetricSource> metric_source(const ModelEnd& end);

/// A[i][j] = J^i_j: the pullback on covectors is (J* a)_j = a_i J^i_j and
/// the action on vectors is (J X)^i = J^i_j X^j. The matrix may depend on the
/// two chart coordinates; derivatives along the remaining two vanish.
struct AlmostComplexStructure {
  std::string name;
  std::function<Mat4<Jet2>(const Jet2& u, const Jet2& v)> matrix;
};

/// J1: d rho -> rho^{-1/3} dx3, dx1 -> dx2.
AlmostComplexStructure kasner_j1();
/// J2: d rho -> -rho^{-1/3} dx3, dx1 -> dx2.
AlmostComplexStructure kasner_j2();
/// A constant complex structure pairing coordinates (0,1) and (2,3).
AlmostComplexStructure constant_structure();

struct HermitianResidual {
  double square = 0.0;      // max |J^2 + I|
  double metric = 0.0;      // max |g(J., J.) - g|
  double nijenhuis = 0.0;   // max |N^k_ij|
};

HermitianResidual hermitian_check(const AlmostComplexStructure& J, const MetricSource& src, double u, double v);

struct ConeProbeRow {
  double scale = 0.0;            // lambda
  double systole = 0.0;          // shortest fiber loop under lambda^{-2} g
  double second_minimum = 0.0;   // second successive minimum, rescaled
  double covering_radius = 0.0;  // rescaled
  double base_extent = 0.0;      // rescaled distance of the probe point to the origin
};

struct ConeProbe {
  std::vector<ConeProbeRow> rows;
  std::optional<ConeDescriptor> expected;
};

/// Evaluates the fiber lattice at base distance lambda_k (on rho, z = 0 or the
/// bisector theta = pi/2) and rescales by 1/lambda_k.
ConeProbe cone_probe(const ModelEnd& end, const std::vector<double>& scales);
/// lambda_k = base^k for k = 0..count-1.
std::vector<double> geometric_scales(double base, int count);

/// Frobenius norm of d_rho(rho N^{-1} N_rho) + d_z(rho N^{-1} N_z) for the
/// unit-determinant rescaling N of the Gram matrix. Cartesian toric ends only.
double harmonic_map_residual(const ModelEnd& end, double rho, double z);
double harmonic_map_residual(const ToricMetric& metric, double rho, double z);

}  // namespace toric
