#pragma once

// Truncated multivariate Taylor arithmetic in the two base coordinates.
//
// A Taylor<N> holds the coefficients of a polynomial in (x, y) of total degree
// at most N, i.e. f(p + (x, y)) = sum c_ij x^i y^j + O(|(x,y)|^{N+1}).
// Products and elementary functions are exact up to roundoff through order N,
// which gives exact metric jets without symbolic algebra. Taylor<2> carries
// value, gradient and Hessian; higher orders are used where a curvature
// quantity itself must be differentiated again.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace toric {

template <int N>
class Taylor {
  static_assert(N >= 0, "order must be nonnegative");

 public:
  static constexpr int order = N;
  static constexpr std::size_t size = static_cast<std::size_t>((N + 1) * (N + 2) / 2);

  constexpr Taylor() = default;
  constexpr Taylor(double v) { c_[0] = v; }  // NOLINT(google-explicit-constructor)

  /// Independent variable `var` (0 -> x, 1 -> y) expanded around `at`.
  static Taylor variable(double at, int var) {
    Taylor t(at);
    if constexpr (N >= 1) t.coef(var == 0 ? 1 : 0, var == 0 ? 0 : 1) = 1.0;
    return t;
  }

  static constexpr std::size_t index(int i, int j) {
    // graded lexicographic: degree d block starts at d(d+1)/2, ordered by j
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }

  constexpr double& coef(int i, int j) { return c_[index(i, j)]; }
  constexpr double coef(int i, int j) const { return c_[index(i, j)]; }
  constexpr double value() const { return c_[0]; }

  /// Partial derivative d^(i+j) f / dx^i dy^j at the expansion point.
  double partial(int i, int j) const {
    return coef(i, j) * factorial(i) * factorial(j);
  }

  const std::array<double, size>& coefficients() const { return c_; }

  Taylor& operator+=(const Taylor& o) {
    for (std::size_t k = 0; k < size; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t k = 0; k < size; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Taylor& operator/=(double s) {
    for (auto& v : c_) v /= s;
    return *this;
  }
  Taylor& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Taylor& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Taylor& operator*=(const Taylor& o) {
    *this = *this * o;
    return *this;
  }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int da = 0; da <= N; ++da) {
      for (int ja = 0; ja <= da; ++ja) {
        const double ca = a.coef(da - ja, ja);
        if (ca == 0.0) continue;
        for (int db = 0; db + da <= N; ++db) {
          for (int jb = 0; jb <= db; ++jb) {
            r.coef(da - ja + db - jb, ja + jb) += ca * b.coef(db - jb, jb);
          }
        }
      }
    }
    return r;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator+(Taylor a, double s) { return a += s; }
  friend Taylor operator+(double s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, double s) { return a -= s; }
  friend Taylor operator-(double s, const Taylor& a) { return -a + s; }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, double s) { return a /= s; }
  friend Taylor operator/(double s, const Taylor& a) { return s * reciprocal(a); }
  friend Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }
  friend Taylor operator-(Taylor a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }

  /// Composes a univariate function with this expansion, given the scaled
  /// derivatives f^(k)(value)/k! for k = 0..N.
  Taylor compose(const std::array<double, N + 1>& scaled) const {
    Taylor h = *this;
    h.c_[0] = 0.0;
    Taylor r(scaled[N]);
    for (int k = N - 1; k >= 0; --k) {
      r = r * h;
      r.c_[0] += scaled[static_cast<std::size_t>(k)];
    }
    return r;
  }

  friend Taylor reciprocal(const Taylor& a) {
    std::array<double, N + 1> s{};
    const double inv = 1.0 / a.value();
    double p = inv;
    for (int k = 0; k <= N; ++k) {
      s[static_cast<std::size_t>(k)] = (k % 2 == 0 ? p : -p);
      p *= inv;
    }
    return a.compose(s);
  }

 private:
  static double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }

  std::array<double, size> c_{};
};

/// Derivative with respect to variable `var`, one order lower.
template <int N>
Taylor<N - 1> derivative(const Taylor<N>& f, int var) {
  static_assert(N >= 1);
  Taylor<N - 1> r;
  for (int d = 0; d <= N - 1; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      r.coef(i, j) = var == 0 ? (i + 1) * f.coef(i + 1, j) : (j + 1) * f.coef(i, j + 1);
    }
  }
  return r;
}

/// Drops all terms above order M.
template <int M, int N>
Taylor<M> truncate(const Taylor<N>& f) {
  static_assert(M <= N);
  Taylor<M> r;
  for (int d = 0; d <= M; ++d)
    for (int j = 0; j <= d; ++j) r.coef(d - j, j) = f.coef(d - j, j);
  return r;
}

template <int N>
Taylor<N> pow(const Taylor<N>& a, double p) {
  std::array<double, N + 1> s{};
  double binom = 1.0;
  for (int k = 0; k <= N; ++k) {
    s[static_cast<std::size_t>(k)] = binom * std::pow(a.value(), p - k);
    binom *= (p - k) / (k + 1);
  }
  return a.compose(s);
}

template <int N>
Taylor<N> sqrt(const Taylor<N>& a) {
  return pow(a, 0.5);
}

template <int N>
Taylor<N> exp(const Taylor<N>& a) {
  std::array<double, N + 1> s{};
  double f = std::exp(a.value());
  for (int k = 0; k <= N; ++k) {
    s[static_cast<std::size_t>(k)] = f;
    f /= (k + 1);
  }
  return a.compose(s);
}

template <int N>
Taylor<N> log(const Taylor<N>& a) {
  std::array<double, N + 1> s{};
  s[0] = std::log(a.value());
  double p = 1.0;
  for (int k = 1; k <= N; ++k) {
    p /= a.value();
    s[static_cast<std::size_t>(k)] = (k % 2 == 1 ? p : -p) / k;
  }
  return a.compose(s);
}

template <int N>
Taylor<N> sin(const Taylor<N>& a) {
  std::array<double, N + 1> s{};
  const double sv = std::sin(a.value()), cv = std::cos(a.value());
  double fact = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) fact *= k;
    const double d = (k % 4 == 0) ? sv : (k % 4 == 1) ? cv : (k % 4 == 2) ? -sv : -cv;
    s[static_cast<std::size_t>(k)] = d / fact;
  }
  return a.compose(s);
}

template <int N>
Taylor<N> cos(const Taylor<N>& a) {
  std::array<double, N + 1> s{};
  const double sv = std::sin(a.value()), cv = std::cos(a.value());
  double fact = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) fact *= k;
    const double d = (k % 4 == 0) ? cv : (k % 4 == 1) ? -sv : (k % 4 == 2) ? -cv : sv;
    s[static_cast<std::size_t>(k)] = d / fact;
  }
  return a.compose(s);
}

using Jet2 = Taylor<2>;
using Jet6 = Taylor<6>;

template <class T>
struct is_taylor : std::false_type {};
template <int N>
struct is_taylor<Taylor<N>> : std::true_type {};

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Taylor<N>& x) {
  return x.value();
}

}  // namespace toric
