#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "toric/jet.hpp"

namespace toric {

inline constexpr int kDim = 4;
inline constexpr double kPi = 3.14159265358979323846;

template <class T>
using Vec4 = std::array<T, 4>;
template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;
template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;
template <class T>
using Tensor3 = std::array<Mat4<T>, 4>;
template <class T>
using Tensor4 = std::array<Tensor3<T>, 4>;

using Mat3d = std::array<std::array<double, 3>, 3>;

template <class T>
Mat4<T> zero_mat4() {
  Mat4<T> m;
  for (auto& row : m)
    for (auto& v : row) v = T(0.0);
  return m;
}

/// Inverse of a 4x4 matrix by Gauss-Jordan with partial pivoting on values.
/// Returns false when a pivot vanishes relative to `rel_tol` times the largest entry of its row.
template <class T>
bool invert4(const Mat4<T>& a, Mat4<T>& inv, double rel_tol = 1e-14) {
  Mat4<T> m = a;
  inv = zero_mat4<T>();
  for (int i = 0; i < 4; ++i) inv[i][i] = T(1.0);
  // pivots are judged against their own row, so wide diagonal ranges are fine
  std::array<double, 4> scale{};
  for (int r = 0; r < 4; ++r) {
    for (const auto& v : a[r]) scale[r] = std::max(scale[r], std::abs(value_of(v)));
    if (scale[r] == 0.0) return false;
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(value_of(m[r][col])) / scale[r] > std::abs(value_of(m[piv][col])) / scale[piv]) piv = r;
    if (std::abs(value_of(m[piv][col])) <= rel_tol * scale[piv]) return false;
    std::swap(scale[piv], scale[col]);
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    const T p = T(1.0) / m[col][col];
    for (int k = 0; k < 4; ++k) {
      m[col][k] = m[col][k] * p;
      inv[col][k] = inv[col][k] * p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const T f = m[r][col];
      for (int k = 0; k < 4; ++k) {
        m[r][k] = m[r][k] - f * m[col][k];
        inv[r][k] = inv[r][k] - f * inv[col][k];
      }
    }
  }
  return true;
}

}  // namespace toric
