#pragma once

// A metric given by closed-form component functions of the two base
// coordinates. Implementations write one template `eval<T>(u, v)` and derive
// from MetricSourceBase, which instantiates it for every scalar type the
// engine needs: plain doubles, and Taylor expansions of order 2, 4 and 6.

#include <functional>
#include <memory>

#include "toric/curvature.hpp"
#include "toric/jet.hpp"
#include "toric/tensor.hpp"

namespace toric {

using Jet4 = Taylor<4>;

class MetricSource {
 public:
  virtual ~MetricSource() = default;

  virtual Mat4<double> components(double u, double v) const = 0;
  virtual Mat4<Jet2> components(const Jet2& u, const Jet2& v) const = 0;
  virtual Mat4<Jet4> components(const Jet4& u, const Jet4& v) const = 0;
  virtual Mat4<Jet6> components(const Jet6& u, const Jet6& v) const = 0;

  virtual ChartTag chart() const { return ChartTag::Generic; }
  /// Throws when (u, v) is outside the evaluation domain.
  virtual void check_point(double u, double v) const;
};

template <class Derived>
class MetricSourceBase : public MetricSource {
 public:
  Mat4<double> components(double u, double v) const override { return self().template eval<double>(u, v); }
  Mat4<Jet2> components(const Jet2& u, const Jet2& v) const override { return self().template eval<Jet2>(u, v); }
  Mat4<Jet4> components(const Jet4& u, const Jet4& v) const override { return self().template eval<Jet4>(u, v); }
  Mat4<Jet6> components(const Jet6& u, const Jet6& v) const override { return self().template eval<Jet6>(u, v); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Exact second-order jet at (u, v).
MetricJet jet_at(const MetricSource& src, double u, double v);

/// Splits Taylor<N> components into a jet whose entries are Taylor<N - 2>.
template <int N>
MetricJetT<Taylor<N - 2>> tower_from(const Mat4<Taylor<N>>& comp) {
  using Out = Taylor<N - 2>;
  MetricJetT<Out> j = zero_jet<Out>();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      j.g[i][k] = truncate<N - 2>(comp[i][k]);
      for (int a = 0; a < 2; ++a) {
        const auto d1 = derivative(comp[i][k], a);
        j.dg[a][i][k] = truncate<N - 2>(d1);
        for (int b = 0; b < 2; ++b) j.ddg[a][b][i][k] = derivative(d1, b);
      }
    }
  return j;
}

/// Jet whose entries are themselves Taylor expansions of order N - 2, so that
/// curvature computed from it can be differentiated N - 2 more times.
template <int N>
MetricJetT<Taylor<N - 2>> jet_tower(const MetricSource& src, double u, double v) {
  src.check_point(u, v);
  return tower_from<N>(src.components(Taylor<N>::variable(u, 0), Taylor<N>::variable(v, 1)));
}

/// Central differences with one Richardson step, for black-box component
/// functions. Step is cbrt(machine epsilon) times `scale`.
MetricJet fd_jet(const std::function<Mat4<double>(double, double)>& components, double u, double v,
                 double scale);

/// lambda = sqrt(24)|W+| as a second-order jet.
ScalarJet weyl_lambda_jet(const MetricSource& src, double u, double v, int orientation = 1);

/// Jet of the conformal metric lambda^{2/3} g.
MetricJet weyl_conformal_jet(const MetricSource& src, double u, double v, int orientation = 1);

struct PositivityResidual {
  double scalar_conformal = 0.0;  // S(g~)
  double residual = 0.0;          // S~^3 (-6 Lap~ + S~) S~^{-1}
  double relative = 0.0;          // residual / S~^4
};

/// Conformal scalar-curvature identity for a Ricci-flat metric with W+ != 0.
PositivityResidual scalar_positivity_residual(const MetricSource& src, double u, double v,
                                              int orientation = 1);

}  // namespace toric
