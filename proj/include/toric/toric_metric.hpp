#pragma once

// T^2-invariant 4-metrics  g = (base form) + sum G_ab dphi_a dphi_b  with the
// Gram matrix G a function of the two base coordinates only.

#include <memory>
#include <string>

#include "toric/metric_source.hpp"
#include "toric/torus_lattice.hpp"

namespace toric {

/// Rectangle of admissible base coordinates (closed bounds, interior required
/// for evaluation where the chart degenerates).
struct BaseDomain {
  double u_min = 0.0;
  double u_max = INFINITY;
  double v_min = -INFINITY;
  double v_max = INFINITY;
};

class GramField {
 public:
  virtual ~GramField() = default;

  virtual Mat2<double> gram(double u, double v) const = 0;
  virtual Mat2<Jet2> gram(const Jet2& u, const Jet2& v) const = 0;
  virtual Mat2<Jet4> gram(const Jet4& u, const Jet4& v) const = 0;
  virtual Mat2<Jet6> gram(const Jet6& u, const Jet6& v) const = 0;

  virtual ChartTag chart() const = 0;
  virtual std::string name() const = 0;
  virtual BaseDomain domain() const { return {}; }
};

template <class Derived>
class GramFieldBase : public GramField {
 public:
  Mat2<double> gram(double u, double v) const override { return self().template eval<double>(u, v); }
  Mat2<Jet2> gram(const Jet2& u, const Jet2& v) const override { return self().template eval<Jet2>(u, v); }
  Mat2<Jet4> gram(const Jet4& u, const Jet4& v) const override { return self().template eval<Jet4>(u, v); }
  Mat2<Jet6> gram(const Jet6& u, const Jet6& v) const override { return self().template eval<Jet6>(u, v); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

enum class BaseForm { Cartesian, Polar };  // d rho^2 + dz^2  or  dr^2 + r^2 dtheta^2

class ToricMetric : public MetricSourceBase<ToricMetric> {
 public:
  ToricMetric(BaseForm base, std::shared_ptr<const GramField> gram, bool swap_generators = false);

  BaseForm base_form() const { return base_; }
  const GramField& gram_field() const { return *gram_; }
  std::shared_ptr<const GramField> gram_ptr() const { return gram_; }
  bool generators_swapped() const { return swap_; }
  ToricMetric with_swapped_generators() const { return {base_, gram_, !swap_}; }

  ChartTag chart() const override;
  void check_point(double u, double v) const override;

  template <class T>
  Mat2<T> fiber(const T& u, const T& v) const {
    Mat2<T> G = gram_->gram(u, v);
    if (swap_) {
      std::swap(G[0][0], G[1][1]);
    }
    return G;
  }

  template <class T>
  Mat4<T> eval(const T& u, const T& v) const {
    Mat4<T> g = zero_mat4<T>();
    g[0][0] = T(1.0);
    g[1][1] = base_ == BaseForm::Polar ? u * u : T(1.0);
    const Mat2<T> G = fiber(u, v);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) g[2 + a][2 + b] = G[a][b];
    return g;
  }

  GramMatrix2 gram_at(double u, double v) const;

 private:
  BaseForm base_;
  std::shared_ptr<const GramField> gram_;
  bool swap_;
};

/// Block-diagonal exact jet at a base point.
MetricJet assemble(const ToricMetric& metric, const ChartPoint& p);

/// f = |d2|, tau with xi = d1 - (1 - tau) d2 orthogonal to d2, sigma = |xi|,
/// and their derivatives along the first base coordinate (rho, or r at fixed theta).
struct PTQuantities {
  double f = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double f_rho = 0.0;
  double sigma_rho = 0.0;
  double tau_rho = 0.0;
};

PTQuantities pt_quantities(const ToricMetric& metric, double u, double v);

Lattice2 fiber_lattice(const ToricMetric& metric, double u, double v, double period = 2.0 * kPi);

/// c1 d1 + c2 d2.
struct KillingCombo {
  double c1 = 1.0;
  double c2 = 0.0;
};

/// Geodesic curvature |nabla_T T| of the orbit of a Killing combination.
double orbit_geodesic_curvature(const ToricMetric& metric, double u, double v, const KillingCombo& combo);

/// Pointwise length of the Killing combination.
double killing_length(const ToricMetric& metric, double u, double v, const KillingCombo& combo);

// A few elementary Gram fields used throughout.

/// G = identity: flat R^2 x T^2.
class ConstantGram : public GramFieldBase<ConstantGram> {
 public:
  explicit ConstantGram(GramMatrix2 g = {}, ChartTag chart = ChartTag::CartesianHalfPlane)
      : g_(g), chart_(chart) {}
  template <class T>
  Mat2<T> eval(const T&, const T&) const {
    return {{{T(g_.g11), T(g_.g12)}, {T(g_.g12), T(g_.g22)}}};
  }
  ChartTag chart() const override { return chart_; }
  std::string name() const override { return "constant"; }

 private:
  GramMatrix2 g_;
  ChartTag chart_;
};

}  // namespace toric
