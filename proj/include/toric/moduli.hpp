#pragma once

// Unit-determinant Gram matrices as points of the hyperbolic plane
// H = {(X, Y) : X > 0}, via
//
//     N(X, Y) = [[X + Y^2 / X, Y / X],
//                [Y / X,       1 / X ]].
//
// Templated on the scalar so the glued Gram fields can be differentiated.

#include <cmath>

#include "toric/error.hpp"
#include "toric/jet.hpp"
#include "toric/tensor.hpp"
#include "toric/torus_lattice.hpp"

namespace toric {

template <class T>
struct HPointT {
  T X;
  T Y;
};
using HPoint = HPointT<double>;

template <class T>
Mat2<T> h_to_gram(const HPointT<T>& h) {
  const T inv = 1.0 / h.X;
  const T off = h.Y * inv;
  return {{{h.X + h.Y * off, off}, {off, inv}}};
}

GramMatrix2 h_to_gram(const HPoint& h);
/// Throws Normalization when |det N - 1| > 1e-12 (relative to the entries).
HPoint gram_to_h(const GramMatrix2& normalized);

/// Phi(X, Y) = (X / sigma, (Y - 1/(1 - tau)) / sigma): the change of fiber
/// basis to ((d1 - d2/(1 - tau))/sqrt(sigma), sqrt(sigma) d2).
template <class T>
HPointT<T> phi(const HPointT<T>& h, const T& sigma, const T& tau) {
  const T c = 1.0 / (1.0 - tau);
  return {h.X / sigma, (h.Y - c) / sigma};
}

template <class T>
HPointT<T> phi_inverse(const HPointT<T>& h, const T& sigma, const T& tau) {
  const T c = 1.0 / (1.0 - tau);
  return {h.X * sigma, h.Y * sigma + c};
}

void check_phi_parameters(double sigma, double tau);

/// tau' with 1 - tau' = 1 / (1 - tau).
double tangency_parameters(double tau);

/// Image of the first model normalized Gram matrix (rotation generator d1):
/// a half circle through (0, 0) and (0, 1/(1 - tau)).
template <class T>
HPointT<T> model_curve1(const T& sigma, const T& tau, const T& r, const T& theta) {
  using std::sin;
  const T rs = r * sin(theta);
  const T one_m = 1.0 - tau;
  const T D = one_m * one_m * rs * rs + sigma * sigma;
  return {sigma * rs / D, one_m * rs * rs / D};
}

/// Image of the second model (rotation generator d2): the line Y = 1 - tau.
template <class T>
HPointT<T> model_curve2(const T& sigma, const T& tau, const T& r, const T& theta) {
  using std::sin;
  return {sigma / (r * sin(theta)), 1.0 - tau};
}

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 (first and second derivatives
/// vanish at t = 0 and t = 1).
template <class T>
T smoothstep(const T& t) {
  return t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
}

/// Curve in H after Phi: Phi(model 1) for theta <= pi/3, Phi(model 2 with
/// tau') for theta >= 2pi/3, affine blend with the quintic smoothstep between.
template <class T>
HPointT<T> interpolate_glued(const T& sigma, const T& tau, const T& r, const T& theta) {
  const double th = value_of(theta);
  const T tau_p = 1.0 - 1.0 / (1.0 - tau);
  auto first = [&] { return phi(model_curve1(sigma, tau, r, theta), sigma, tau); };
  auto second = [&] { return phi(model_curve2(sigma, tau_p, r, theta), sigma, tau); };
  if (th <= kPi / 3.0) return first();
  if (th >= 2.0 * kPi / 3.0) return second();
  const T chi = smoothstep((theta - kPi / 3.0) / (kPi / 3.0));
  const auto a = first();
  const auto b = second();
  return {a.X * (1.0 - chi) + b.X * chi, a.Y * (1.0 - chi) + b.Y * chi};
}

/// Normalized Gram matrix of the glued family: Phi^{-1} of the blended curve.
template <class T>
Mat2<T> glued_normalized_gram(const T& sigma, const T& tau, const T& r, const T& theta) {
  return h_to_gram<T>(phi_inverse(interpolate_glued(sigma, tau, r, theta), sigma, tau));
}

}  // namespace toric
