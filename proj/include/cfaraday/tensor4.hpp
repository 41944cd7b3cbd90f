#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include "cfaraday/error.hpp"
#include "cfaraday/scalar.hpp"

namespace cfaraday {

/// 4x4 matrix over a scalar domain (double, std::complex<double>, Rational or
/// RationalComplex). Indices are space-time indices mu, nu in 0..3 with 0 the
/// time direction. The domain is a property of the type.
template <class S>
class Tensor4 {
 public:
  using Scalar = S;
  static constexpr ScalarDomain domain = ScalarTraits<S>::domain;

  Tensor4() {
    for (auto& row : m_) row.fill(S(0));
  }

  static Tensor4 identity() {
    Tensor4 t;
    for (int i = 0; i < 4; ++i) t(i, i) = S(1);
    return t;
  }

  /// g = diag(1, -1, -1, -1); its own inverse.
  static Tensor4 metric() {
    Tensor4 t;
    t(0, 0) = S(1);
    for (int i = 1; i < 4; ++i) t(i, i) = S(-1);
    return t;
  }

  S& operator()(int mu, int nu) { return m_[mu][nu]; }
  const S& operator()(int mu, int nu) const { return m_[mu][nu]; }

  Tensor4& operator+=(const Tensor4& o) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m_[i][j] += o.m_[i][j];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m_[i][j] -= o.m_[i][j];
    return *this;
  }
  Tensor4& operator*=(const S& s) {
    for (auto& row : m_)
      for (auto& v : row) v *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(Tensor4 a, const S& s) { return a *= s; }
  friend Tensor4 operator*(const S& s, Tensor4 a) { return a *= s; }
  friend Tensor4 operator-(Tensor4 a) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a.m_[i][j] = S(-a.m_[i][j]);
    return a;
  }
  friend bool operator==(const Tensor4& a, const Tensor4& b) { return a.m_ == b.m_; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& row : m_)
      for (const auto& v : row) m = std::max(m, magnitude(v));
    return m;
  }

  /// Exact equality in the rational domain; a few ulps of the largest entry
  /// in floating point.
  bool is_antisymmetric() const {
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * max_abs();
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        S sum = m_[i][j] + m_[j][i];
        if constexpr (is_exact_v<S>) {
          if (sum != S(0)) return false;
        } else {
          if (magnitude(sum) > tol) return false;
        }
      }
    }
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const Tensor4& t) {
    for (int i = 0; i < 4; ++i) {
      os << (i == 0 ? "[" : " ");
      for (int j = 0; j < 4; ++j) os << t(i, j) << (j < 3 ? " " : "");
      os << (i == 3 ? "]" : "\n");
    }
    return os;
  }

 private:
  std::array<std::array<S, 4>, 4> m_;
};

template <class S>
Tensor4<S> matmul(const Tensor4<S>& a, const Tensor4<S>& b) {
  Tensor4<S> c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      S acc(0);
      for (int k = 0; k < 4; ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

template <class S>
S trace(const Tensor4<S>& a) {
  return S(a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3));
}

/// Converts a real tensor to the matching complex domain.
template <class R>
Tensor4<ComplexOf<R>> complexify(const Tensor4<R>& t) {
  Tensor4<ComplexOf<R>> c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c(i, j) = make_complex(t(i, j), R(0));
  return c;
}

/// Laplace expansion along the first two rows (products of 2x2 minors).
template <class S>
S det4(const Tensor4<S>& a) {
  const S s0 = a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1);
  const S s1 = a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2);
  const S s2 = a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3);
  const S s3 = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
  const S s4 = a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3);
  const S s5 = a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3);

  const S c5 = a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3);
  const S c4 = a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3);
  const S c3 = a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2);
  const S c2 = a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3);
  const S c1 = a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2);
  const S c0 = a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1);

  return S(s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0);
}

/// Closed-form Pfaffian of an antisymmetric 4x4 matrix; pf(A)^2 = det(A).
template <class S>
S pfaffian4(const Tensor4<S>& a) {
  if (!a.is_antisymmetric()) {
    throw Error(ErrorCode::NotAntisymmetric, "pfaffian4 requires an antisymmetric matrix");
  }
  return S(a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2));
}

namespace detail {

template <class S>
S minor3(const Tensor4<S>& a, int skip_row, int skip_col) {
  int r[3];
  int c[3];
  for (int i = 0, n = 0; i < 4; ++i)
    if (i != skip_row) r[n++] = i;
  for (int j = 0, n = 0; j < 4; ++j)
    if (j != skip_col) c[n++] = j;
  auto m = [&](int i, int j) -> const S& { return a(r[i], c[j]); };
  return S(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)));
}

}  // namespace detail

/// adj(A) with A * adj(A) = det(A) * I. Used for Jacobi's formula
/// d det(A) = tr(adj(A) dA).
template <class S>
Tensor4<S> adjugate4(const Tensor4<S>& a) {
  Tensor4<S> adj;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      S m = detail::minor3(a, i, j);
      adj(j, i) = ((i + j) % 2 == 0) ? m : S(-m);
    }
  return adj;
}

/// Elementary symmetric functions e1..e4 of the eigenvalues of Y, from the
/// power sums tr(Y^m) (Newton's identities). det(I + tY) = 1 + sum_m e_m t^m.
template <class S>
std::array<S, 4> elementary_symmetric4(const Tensor4<S>& y) {
  const Tensor4<S> y2 = matmul(y, y);
  const Tensor4<S> y3 = matmul(y2, y);
  const S p1 = trace(y);
  const S p2 = trace(y2);
  const S p3 = trace(y3);
  const S p4 = trace(matmul(y3, y));
  const S e1 = p1;
  const S e2 = S((e1 * p1 - p2) / S(2));
  const S e3 = S((e2 * p1 - e1 * p2 + p3) / S(3));
  const S e4 = S((e3 * p1 - e2 * p2 + e1 * p3 - p4) / S(4));
  return {e1, e2, e3, e4};
}

/// det(I + Y) - 1 without forming det(I + Y), so small Y loses nothing to
/// cancellation against the 1.
template <class S>
S det_identity_plus_minus_one(const Tensor4<S>& y) {
  const auto e = elementary_symmetric4(y);
  return S(e[0] + e[1] + e[2] + e[3]);
}

}  // namespace cfaraday
